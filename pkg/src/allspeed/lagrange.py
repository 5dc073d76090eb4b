"""Lagrange-Projection scheme for the Euler equations.

Three phases per step: an acoustic relaxation solve for interface star
values, a Lagrangian predictor with per-cell compression factor L, and a
dimensionally split donor-cell advection that undoes the predictor's
non-conservativity.  Star values come either from the 1D (dimensionally
split) acoustic solver or from its truly multi-dimensional 9-point
extension.

Face array conventions (padded cell arrays have shape (nx+4, ny+4)):

* x-face arrays have shape (nx+3, ny+2); entry [a, b] is the face between
  padded cells (a, b+1) and (a+1, b+1).
* y-face arrays have shape (nx+2, ny+3); entry [a, b] is the face between
  padded cells (a+1, b) and (a+1, b+1).

This covers every face of the interior cells plus one halo ring, which is
what the predictor needs so that the advective upwind flux can reference
neighbor predictor states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import EN, MX, MY, RHO, Field, InvalidState, StepFailure, cons_to_prim, fill_ghosts
from .stencil import AXIS_X, AXIS_Y, diff_half, diff_wide, second_sum, sum_half

U, V, P = 1, 2, 3

DEFAULT_K = 1.01


@dataclass
class LpStarFaces:
    u_star: np.ndarray    # x-faces
    p_star_x: np.ndarray  # x-faces
    v_star: np.ndarray    # y-faces
    p_star_y: np.ndarray  # y-faces


@dataclass
class LpPredictor:
    L: np.ndarray        # compression factors, interior + halo ring
    q_minus: np.ndarray  # (4, nx+2, ny+2) intermediate conserved states


def face_speeds(prim: np.ndarray, gamma: float, variant: str, K: float = DEFAULT_K):
    """Per-face relaxation speeds a = K * max(rho c) over the face's stencil.

    The split stencil is the L/R cell pair; the multi-d stencil is the full
    2x3 (or 3x2) block feeding the star values of that face.
    """
    rc = prim[RHO] * np.sqrt(gamma * prim[P] / prim[RHO])
    mx = np.maximum(rc[:-1, :], rc[1:, :])
    my = np.maximum(rc[:, :-1], rc[:, 1:])
    if variant == "split":
        return K * mx[:, 1:-1], K * my[1:-1, :]
    a_x = K * np.maximum(np.maximum(mx[:, :-2], mx[:, 1:-1]), mx[:, 2:])
    a_y = K * np.maximum(np.maximum(my[:-2, :], my[1:-1, :]), my[2:, :])
    return a_x, a_y


def lp_star_split(prim: np.ndarray, a_x: np.ndarray, a_y: np.ndarray) -> LpStarFaces:
    """Dimensionally split acoustic star values on both face families."""
    u, v, p = prim[U], prim[V], prim[P]
    cx = (slice(None), slice(1, -1))
    u_star = sum_half(u, AXIS_X)[cx] / 2 - diff_half(p, AXIS_X)[cx] / (2 * a_x)
    p_star_x = sum_half(p, AXIS_X)[cx] / 2 - a_x * diff_half(u, AXIS_X)[cx] / 2
    cy = (slice(1, -1), slice(None))
    v_star = sum_half(v, AXIS_Y)[cy] / 2 - diff_half(p, AXIS_Y)[cy] / (2 * a_y)
    p_star_y = sum_half(p, AXIS_Y)[cy] / 2 - a_y * diff_half(v, AXIS_Y)[cy] / 2
    return LpStarFaces(u_star, p_star_x, v_star, p_star_y)


def lp_star_multid(prim: np.ndarray, a_x: np.ndarray, a_y: np.ndarray,
                   dx: float, dy: float) -> LpStarFaces:
    """Multi-dimensional star values: transverse-averaged stencils, and the
    full 9-point divergence combination in the pressure star."""
    u, v, p = prim[U], prim[V], prim[P]
    u_star = second_sum(sum_half(u, AXIS_X), AXIS_Y) / 8 \
        - second_sum(diff_half(p, AXIS_X), AXIS_Y) / (8 * a_x)
    div_x = second_sum(diff_half(u, AXIS_X), AXIS_Y) / 4 \
        + (dx / dy) * diff_wide(sum_half(v, AXIS_X), AXIS_Y) / 4
    p_star_x = second_sum(sum_half(p, AXIS_X), AXIS_Y) / 8 - a_x * div_x / 2
    v_star = sum_half(second_sum(v, AXIS_X), AXIS_Y) / 8 \
        - diff_half(second_sum(p, AXIS_X), AXIS_Y) / (8 * a_y)
    div_y = (dy / dx) * sum_half(diff_wide(u, AXIS_X), AXIS_Y) / 4 \
        + diff_half(second_sum(v, AXIS_X), AXIS_Y) / 4
    p_star_y = sum_half(second_sum(p, AXIS_X), AXIS_Y) / 8 - a_y * div_y / 2
    return LpStarFaces(u_star, p_star_x, v_star, p_star_y)


def lp_predictor(q: np.ndarray, stars: LpStarFaces, dt: float,
                 dx: float, dy: float) -> LpPredictor:
    """Lagrangian intermediate step: compression factor and predicted states
    on the interior cells plus one halo ring."""
    qc = q[:, 1:-1, 1:-1]
    L = 1.0 + (dt / dx) * diff_half(stars.u_star, AXIS_X) \
        + (dt / dy) * diff_half(stars.v_star, AXIS_Y)
    if np.min(L) <= 0.0:
        raise StepFailure(f"non-positive compression factor (min L = {np.min(L):.3g})")
    rho_m = qc[RHO] / L
    mx_m = (qc[MX] - (dt / dx) * diff_half(stars.p_star_x, AXIS_X)) / L
    my_m = (qc[MY] - (dt / dy) * diff_half(stars.p_star_y, AXIS_Y)) / L
    e_m = (qc[EN]
           - (dt / dx) * diff_half(stars.u_star * stars.p_star_x, AXIS_X)
           - (dt / dy) * diff_half(stars.v_star * stars.p_star_y, AXIS_Y)) / L
    return LpPredictor(L, np.stack([rho_m, mx_m, my_m, e_m]))


def lp_advect_and_update(q: np.ndarray, stars: LpStarFaces, pred: LpPredictor,
                         dt: float, dx: float, dy: float) -> np.ndarray:
    """Donor-cell advection by the star velocities; returns the new interior.

    Ties u* = 0 use the left (lower) state; the flux is unaffected since the
    star velocity multiplies it.
    """
    qm = pred.q_minus
    us = stars.u_star[1:-1, 1:-1]
    fx = us * np.where(us >= 0.0, qm[:, :-1, 1:-1], qm[:, 1:, 1:-1])
    vs = stars.v_star[1:-1, 1:-1]
    fy = vs * np.where(vs >= 0.0, qm[:, 1:-1, :-1], qm[:, 1:-1, 1:])
    return (qm[:, 1:-1, 1:-1] * pred.L[1:-1, 1:-1]
            - (dt / dx) * (fx[:, 1:, :] - fx[:, :-1, :])
            - (dt / dy) * (fy[:, :, 1:] - fy[:, :, :-1]))


def lp_step(field: Field, dt: float, variant: str = "multid",
            K: float = DEFAULT_K, gamma: float = 1.4) -> Field:
    """One forward-Euler step of the Lagrange-Projection scheme.

    Raises StepFailure on a non-positive compression factor or an invalid
    resulting state; the caller may retry with a smaller dt.
    """
    f = field.copy()
    fill_ghosts(f)
    prim = cons_to_prim(f.data, gamma)
    a_x, a_y = face_speeds(prim, gamma, variant, K)
    if variant == "split":
        stars = lp_star_split(prim, a_x, a_y)
    else:
        stars = lp_star_multid(prim, a_x, a_y, f.spec.dx, f.spec.dy)
    pred = lp_predictor(f.data, stars, dt, f.spec.dx, f.spec.dy)
    qnew = lp_advect_and_update(f.data, stars, pred, dt, f.spec.dx, f.spec.dy)
    try:
        cons_to_prim(qnew, gamma)
    except InvalidState as exc:
        raise StepFailure(f"invalid state after step: {exc}") from exc
    out = Field.empty(field.spec)
    out.interior[:] = qnew
    out.time = field.time + dt
    return out
