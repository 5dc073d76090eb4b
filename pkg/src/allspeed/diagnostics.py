"""Low-Mach measurement suite: l1 asymptotic norms, radial scatter, slope fits.

The l1 norms follow the conventions of the reported plots: the pressure
gradient is scaled by the squared reporting epsilon, both divergence norms
carry a factor dx so they are directly comparable, and the second velocity
difference is measured along x only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import NG, EN, MX, MY, RHO, Field, cons_to_prim, fill_ghosts, sound_speed_and_mach
from .stencil import AXIS_X, AXIS_Y, central_divergence, diff_wide, discrete_divergence, second_diff

U, V, P = 1, 2, 3

CSV_COLUMNS = ("time", "l1_gradp_x", "l1_gradp_y", "l1_div_multid", "l1_div_central",
               "l1_d2u", "mass", "mom_x", "mom_y", "energy", "max_mach")


@dataclass
class DiagnosticsRecord:
    time: float
    l1_gradp_x: float
    l1_gradp_y: float
    l1_div_multid: float
    l1_div_central: float
    l1_d2u: float
    mass: float
    mom_x: float
    mom_y: float
    energy: float
    max_mach: float

    def csv_row(self) -> str:
        return ",".join(repr(getattr(self, c)) for c in CSV_COLUMNS)


def measure(field: Field, eps_report: float = 1.0, gamma: float = 1.4) -> DiagnosticsRecord:
    """Evaluate all diagnostic norms on a field snapshot (fills its ghosts)."""
    fill_ghosts(field)
    s = field.spec
    prim = cons_to_prim(field.data, gamma)
    u, v, p = prim[U], prim[V], prim[P]
    ii = (slice(1, -1), slice(NG, -NG))   # interior window of x-wide ops
    jj = (slice(NG, -NG), slice(1, -1))
    e2 = eps_report * eps_report
    gradp_x = float(np.mean(np.abs(e2 * diff_wide(p, AXIS_X)[ii] / 2)))
    gradp_y = float(np.mean(np.abs(e2 * diff_wide(p, AXIS_Y)[jj] / 2)))
    # vertex divergences (i+1/2, j+1/2) for every interior cell
    div = discrete_divergence(u, v, s.dx, s.dy)[NG:-(NG - 1), NG:-(NG - 1)]
    div_multid = s.dx * float(np.mean(np.abs(div)))
    cdiv = central_divergence(u, v, s.dx, s.dy)[NG - 1:-(NG - 1), NG - 1:-(NG - 1)]
    div_central = s.dx * float(np.mean(np.abs(cdiv)))
    d2u = float(np.mean(np.abs(second_diff(u, AXIS_X)[ii])))
    totals = field.conserved_totals()
    _, mach = sound_speed_and_mach(prim[:, NG:-NG, NG:-NG], gamma)
    return DiagnosticsRecord(field.time, gradp_x, gradp_y, div_multid, div_central, d2u,
                             float(totals[RHO]), float(totals[MX]), float(totals[MY]),
                             float(totals[EN]), float(np.max(mach)))


def radial_scatter(field: Field, center=None, gamma: float = 1.4) -> np.ndarray:
    """One record (r, rho, |v_radial|, p) per interior cell, as an (N, 4) array."""
    s = field.spec
    if center is None:
        center = (s.x0 + 0.5 * s.nx * s.dx, s.y0 + 0.5 * s.ny * s.dy)
    prim = cons_to_prim(field.interior, gamma)
    x, y = s.cell_centers()
    rx = x - center[0]
    ry = y - center[1]
    r = np.sqrt(rx * rx + ry * ry)
    r = np.broadcast_to(r, (s.nx, s.ny))
    with np.errstate(invalid="ignore"):
        vrad = np.where(r > 0, (prim[U] * rx + prim[V] * ry) / np.where(r > 0, r, 1.0), 0.0)
    out = np.column_stack([r.ravel(), prim[RHO].ravel(), np.abs(vrad).ravel(), prim[P].ravel()])
    return out


def write_scatter_csv(path, records: np.ndarray) -> None:
    with open(path, "w") as fh:
        fh.write("r,rho,vrad,p\n")
        for row in records:
            fh.write(",".join(repr(float(t)) for t in row) + "\n")


def slope_fit(pairs) -> float:
    """Least-squares slope of log(norm) against log(eps)."""
    pairs = list(pairs)
    if len(pairs) < 2:
        raise ValueError("need at least two (eps, norm) pairs")
    eps = np.array([p[0] for p in pairs], dtype=float)
    val = np.array([p[1] for p in pairs], dtype=float)
    if np.any(eps <= 0) or np.any(val <= 0):
        raise ValueError("slope fit needs positive values")
    return float(np.polyfit(np.log(eps), np.log(val), 1)[0])
