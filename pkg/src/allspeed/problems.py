"""Initial-condition generators for the benchmark problems.

All generators sample primitive fields at cell centers and return a Field.
The background pressure of the vortex problems controls the Mach number:
p0 = 1/(gamma eps^2) - 1/2 makes the maximum local Mach number equal eps.
"""

from __future__ import annotations

from dataclasses import dataclass, field as _dc_field

import numpy as np

from .grid import Field, GridSpec, prim_to_cons


@dataclass
class ProblemSpec:
    """Problem selection plus the knobs shared by all generators."""

    name: str
    nx: int = 50
    ny: int = 50
    eps: float = 1.0
    gamma: float = 1.4
    params: dict = _dc_field(default_factory=dict)

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError("eps must be positive")


def _vortex_primitives(x, y, center, eps, gamma):
    """Gresho vortex primitives at coordinates x (nx,1), y (1,ny)."""
    p0 = 1.0 / (gamma * eps * eps) - 0.5
    rx = x - center[0]
    ry = y - center[1]
    r = np.sqrt(rx * rx + ry * ry)  # broadcasts to (nx, ny)
    v_phi = np.where(r < 0.2, 5.0 * r, np.where(r < 0.4, 2.0 - 5.0 * r, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        logr = np.log(np.where(r > 0, 5.0 * r, 1.0))
    p = np.where(r < 0.2, p0 + 12.5 * r * r,
                 np.where(r < 0.4, p0 + 4.0 * logr + 4.0 - 20.0 * r + 12.5 * r * r,
                          p0 + 4.0 * np.log(2.0) - 2.0))
    safe_r = np.where(r > 0, r, 1.0)
    u = np.where(r > 0, -v_phi * ry / safe_r, 0.0)
    v = np.where(r > 0, v_phi * rx / safe_r, 0.0)
    rho = np.ones_like(r)
    return np.stack([rho, u, v, p])


def gresho(nx: int = 50, ny: int = 50, eps: float = 1e-2, gamma: float = 1.4,
           bc: str = "periodic") -> Field:
    """Stationary vortex on [0,1]^2 centered at (0.5, 0.5)."""
    spec = GridSpec(nx, ny, 1.0 / nx, 1.0 / ny, bc_x=bc, bc_y=bc)
    x, y = spec.cell_centers()
    w = _vortex_primitives(x, y, (0.5, 0.5), eps, gamma)
    return Field.from_primitive(spec, w, gamma)


def gresho_with_sound_wave(nx: int = 100, ny: int = 100, eps: float = 1e-2,
                           gamma: float = 1.4) -> Field:
    """Vortex on [0,2]^2 with a right-moving Gaussian sound pulse superposed.

    The vortex sits at (1.0, 0.5) so the pulse, which starts near x = 0.2,
    traverses it.  Perturbations are additive in the primitive variables:
    dp = 300 exp(-((x - 0.2)/0.02)^2), drho = dp / c_inf^2,
    du = dp / (rho_inf c_inf), with the far-field sound speed c_inf.
    """
    spec = GridSpec(nx, ny, 2.0 / nx, 2.0 / ny, bc_x="zero-gradient", bc_y="zero-gradient")
    x, y = spec.cell_centers()
    w = _vortex_primitives(x, y, (1.0, 0.5), eps, gamma)
    p0 = 1.0 / (gamma * eps * eps) - 0.5
    p_inf = p0 + 4.0 * np.log(2.0) - 2.0
    rho_inf = 1.0
    c_inf = np.sqrt(gamma * p_inf / rho_inf)
    dp = 300.0 * np.exp(-(((x - 0.2) / 0.02) ** 2)) * np.ones_like(y)
    w[0] += dp / c_inf**2
    w[1] += dp / (rho_inf * c_inf)
    w[3] += dp
    return Field.from_primitive(spec, w, gamma)


def radial_sod(nx: int = 200, ny: int = 200, gamma: float = 1.4) -> Field:
    """Radial shock tube on [0,1]^2: canonical Sod states inside/outside r = 0.3."""
    spec = GridSpec(nx, ny, 1.0 / nx, 1.0 / ny, bc_x="zero-gradient", bc_y="zero-gradient")
    x, y = spec.cell_centers()
    r = np.sqrt((x - 0.5) ** 2 + (y - 0.5) ** 2)
    inside = r < 0.3
    rho = np.where(inside, 1.0, 0.125)
    p = np.where(inside, 1.0, 0.1)
    zero = np.zeros_like(rho)
    return Field.from_primitive(spec, np.stack([rho, zero, zero, p]), gamma)


def kelvin_helmholtz(nx: int = 300, ny: int = 150, gamma: float = 1.4) -> Field:
    """Shear layer on [0,2] x [0,1], periodic.

    The strip y in [0.25, 0.75] moves left with density 1.01, the rest moves
    right with density 1; shear speed 0.1 and uniform pressure 1/gamma give a
    background sound speed of 1 (shear Mach number 0.1).  The interface is
    seeded with v = 1e-3 sin(2 pi x / 0.25).
    """
    spec = GridSpec(nx, ny, 2.0 / nx, 1.0 / ny, bc_x="periodic", bc_y="periodic")
    x, y = spec.cell_centers()
    strip = (y >= 0.25) & (y < 0.75)
    rho = np.where(strip, 1.01, 1.0) * np.ones_like(x)
    u = np.where(strip, -0.1, 0.1) * np.ones_like(x)
    v = 1e-3 * np.sin(2.0 * np.pi * x / 0.25) * np.ones_like(y)
    p = np.full_like(rho, 1.0 / gamma)
    return Field.from_primitive(spec, np.stack([rho, u, v, p]), gamma)


def sod_1d(n_cells: int = 100, gamma: float = 1.4, ny: int = 4) -> Field:
    """Sod shock tube as a y-invariant strip: jump at x = 0.5, periodic in y."""
    spec = GridSpec(n_cells, ny, 1.0 / n_cells, 1.0 / n_cells,
                    bc_x="zero-gradient", bc_y="periodic")
    x, y = spec.cell_centers()
    left = x < 0.5
    rho = np.where(left, 1.0, 0.125) * np.ones_like(y)
    p = np.where(left, 1.0, 0.1) * np.ones_like(y)
    zero = np.zeros_like(rho)
    return Field.from_primitive(spec, np.stack([rho, zero, zero, p]), gamma)


PROBLEMS = {
    "gresho": gresho,
    "gresho-sound-wave": gresho_with_sound_wave,
    "radial-sod": radial_sod,
    "kelvin-helmholtz": kelvin_helmholtz,
    "sod-1d": sod_1d,
}


def build_problem(spec: ProblemSpec) -> Field:
    """Instantiate a problem by name with grid-size/eps overrides."""
    if spec.name not in PROBLEMS:
        raise ValueError(f"unknown problem {spec.name!r}; choose from {sorted(PROBLEMS)}")
    kwargs = dict(spec.params)
    if spec.name == "gresho":
        kwargs.setdefault("eps", spec.eps)
        kwargs.setdefault("nx", spec.nx)
        kwargs.setdefault("ny", spec.ny)
    elif spec.name == "gresho-sound-wave":
        kwargs.setdefault("eps", spec.eps)
        kwargs.setdefault("nx", spec.nx)
        kwargs.setdefault("ny", spec.ny)
    elif spec.name == "sod-1d":
        kwargs.setdefault("n_cells", spec.nx)
    else:
        kwargs.setdefault("nx", spec.nx)
        kwargs.setdefault("ny", spec.ny)
    kwargs.setdefault("gamma", spec.gamma)
    return PROBLEMS[spec.name](**kwargs)
