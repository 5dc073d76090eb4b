"""Suliciu-type relaxation solver for the Euler equations.

The interface Riemann fan has four regions (left state, two star states,
right state) separated by the outer wave speeds and the contact u*.  The
dimensionally split variant uses the classic 1D star states; the truly
multi-dimensional variant replaces the velocity jump in p* and in the star
density denominators by the 9-point divergence combination and averages
the remaining jumps transversally.  Outer wave speeds keep the 1D
definition sigma_L = u_L - a/rho_L, sigma_R = u_R + a/rho_R (the exact
outer characteristics of the relaxation system).

Face array conventions match lagrange.py: x-face arrays (nx+3, ny+2) with
[a, b] the face between padded cells (a, b+1) and (a+1, b+1); y-face
arrays (nx+2, ny+3) with [a, b] between (a+1, b) and (a+1, b+1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import EN, MX, MY, RHO, Field, InvalidState, StepFailure, cons_to_prim, fill_ghosts
from .lagrange import face_speeds
from .stencil import AXIS_X, AXIS_Y, diff_half, diff_wide, second_sum, sum_half

U, V, P = 1, 2, 3

DEFAULT_K = 1.01
MAX_DOUBLINGS = 5


class SubcharacteristicViolation(RuntimeError):
    """A star-density denominator was non-positive; enlarge a and retry."""

    def __init__(self, message, mask=None):
        super().__init__(message)
        self.mask = mask


@dataclass
class RelaxEdgeStates:
    """Star quantities of the relaxation Riemann fan on a family of faces."""

    u_star: np.ndarray
    p_star: np.ndarray
    rho_star_l: np.ndarray
    rho_star_r: np.ndarray
    spec_e_star_l: np.ndarray  # specific total energies e*/rho*
    spec_e_star_r: np.ndarray
    v_star_l: np.ndarray       # transported transverse velocities
    v_star_r: np.ndarray
    a: np.ndarray
    sigma_l: np.ndarray
    sigma_r: np.ndarray


def _star_densities(rho_l, rho_r, div_term, p_jump, a):
    den_l = 1.0 + rho_l * div_term / (2 * a) - rho_l * p_jump / (2 * a * a)
    den_r = 1.0 + rho_r * div_term / (2 * a) + rho_r * p_jump / (2 * a * a)
    bad = (den_l <= 0.0) | (den_r <= 0.0)
    if np.any(bad):
        raise SubcharacteristicViolation("non-positive star-density denominator", mask=bad)
    return rho_l / den_l, rho_r / den_r


def _energies_and_speeds(wl, wr, u_star, p_star, a, gamma):
    rho_l, u_l, v_l, p_l = wl[RHO], wl[U], wl[V], wl[P]
    rho_r, u_r, v_r, p_r = wr[RHO], wr[U], wr[V], wr[P]
    spec_e_l = (p_l / (gamma - 1) + 0.5 * rho_l * (u_l**2 + v_l**2)) / rho_l \
        + (p_l * u_l - p_star * u_star) / a
    spec_e_r = (p_r / (gamma - 1) + 0.5 * rho_r * (u_r**2 + v_r**2)) / rho_r \
        + (p_star * u_star - p_r * u_r) / a
    sigma_l = u_l - a / rho_l
    sigma_r = u_r + a / rho_r
    return spec_e_l, spec_e_r, sigma_l, sigma_r


def relax_star_1d(wl: np.ndarray, wr: np.ndarray, a, gamma: float = 1.4) -> RelaxEdgeStates:
    """Classic 1D star states for primitive L/R states (rho, u_n, v_t, p).

    Component 1 is the face-normal velocity, component 2 the transverse one.
    Raises SubcharacteristicViolation when a is too small.
    """
    wl = np.asarray(wl, dtype=float)
    wr = np.asarray(wr, dtype=float)
    a = np.asarray(a, dtype=float)
    du = wr[U] - wl[U]
    dp = wr[P] - wl[P]
    u_star = 0.5 * (wl[U] + wr[U]) - dp / (2 * a)
    p_star = 0.5 * (wl[P] + wr[P]) - a * du / 2
    rho_star_l, rho_star_r = _star_densities(wl[RHO], wr[RHO], du, dp, a)
    spec_e_l, spec_e_r, sigma_l, sigma_r = _energies_and_speeds(wl, wr, u_star, p_star, a, gamma)
    return RelaxEdgeStates(u_star, p_star, rho_star_l, rho_star_r,
                           spec_e_l, spec_e_r, wl[V], wr[V], a, sigma_l, sigma_r)


def _multid_star_terms_x(prim, dx, dy):
    u, v, p = prim[U], prim[V], prim[P]
    u_avg = second_sum(sum_half(u, AXIS_X), AXIS_Y) / 8
    p_avg = second_sum(sum_half(p, AXIS_X), AXIS_Y) / 8
    p_jump = second_sum(diff_half(p, AXIS_X), AXIS_Y) / 4
    div_term = second_sum(diff_half(u, AXIS_X), AXIS_Y) / 4 \
        + (dx / dy) * diff_wide(sum_half(v, AXIS_X), AXIS_Y) / 4
    return u_avg, p_avg, p_jump, div_term


def _multid_star_terms_y(prim, dx, dy):
    u, v, p = prim[U], prim[V], prim[P]
    v_avg = sum_half(second_sum(v, AXIS_X), AXIS_Y) / 8
    p_avg = sum_half(second_sum(p, AXIS_X), AXIS_Y) / 8
    p_jump = diff_half(second_sum(p, AXIS_X), AXIS_Y) / 4
    div_term = (dy / dx) * sum_half(diff_wide(u, AXIS_X), AXIS_Y) / 4 \
        + diff_half(second_sum(v, AXIS_X), AXIS_Y) / 4
    return v_avg, p_avg, p_jump, div_term


def _multid_edge(prim, wl, wr, a, axis, dx, dy, gamma) -> RelaxEdgeStates:
    if axis == AXIS_X:
        n_avg, p_avg, p_jump, div_term = _multid_star_terms_x(prim, dx, dy)
    else:
        n_avg, p_avg, p_jump, div_term = _multid_star_terms_y(prim, dx, dy)
    u_star = n_avg - p_jump / (2 * a)
    p_star = p_avg - a * div_term / 2
    rho_star_l, rho_star_r = _star_densities(wl[RHO], wr[RHO], div_term, p_jump, a)
    spec_e_l, spec_e_r, sigma_l, sigma_r = _energies_and_speeds(wl, wr, u_star, p_star, a, gamma)
    return RelaxEdgeStates(u_star, p_star, rho_star_l, rho_star_r,
                           spec_e_l, spec_e_r, wl[V], wr[V], a, sigma_l, sigma_r)


def _face_states(prim, axis):
    """Primitive L/R states per face, rotated so component 1 is face-normal."""
    if axis == AXIS_X:
        w = prim[:, :, 1:-1]
        return w[:, :-1, :], w[:, 1:, :]
    w = prim[[RHO, V, U, P]][:, 1:-1, :]
    return w[:, :, :-1], w[:, :, 1:]


def relax_star_multid(field: Field, axis: int, a, gamma: float = 1.4) -> RelaxEdgeStates:
    """Multi-d star states for the whole x- or y-face family of a field."""
    f = field.copy()
    fill_ghosts(f)
    prim = cons_to_prim(f.data, gamma)
    wl, wr = _face_states(prim, axis)
    return _multid_edge(prim, wl, wr, np.asarray(a, dtype=float), axis,
                        f.spec.dx, f.spec.dy, gamma)


def relax_interface_flux(edge: RelaxEdgeStates, wl: np.ndarray, wr: np.ndarray,
                         gamma: float = 1.4) -> np.ndarray:
    """Flux of the state sitting at x/t = 0 in the four-region fan.

    Components are (mass, normal momentum, transverse momentum, energy);
    the relaxation-system flux (rho u, rho u^2 + pi, rho u v, u (e + pi))
    is evaluated with the relaxed pressure pi of the selected state.
    """
    e_l = wl[P] / (gamma - 1) + 0.5 * wl[RHO] * (wl[U]**2 + wl[V]**2)
    e_r = wr[P] / (gamma - 1) + 0.5 * wr[RHO] * (wr[U]**2 + wr[V]**2)
    conds = [edge.sigma_l > 0.0, edge.u_star > 0.0, edge.sigma_r > 0.0]

    def pick(cl, csl, csr, cr):
        return np.select(conds, [cl, csl, csr], default=cr)

    rho = pick(wl[RHO], edge.rho_star_l, edge.rho_star_r, wr[RHO])
    un = pick(wl[U], edge.u_star, edge.u_star, wr[U])
    vt = pick(wl[V], edge.v_star_l, edge.v_star_r, wr[V])
    en = pick(e_l, edge.rho_star_l * edge.spec_e_star_l,
              edge.rho_star_r * edge.spec_e_star_r, e_r)
    pi = pick(wl[P], edge.p_star, edge.p_star, wr[P])
    mass = rho * un
    return np.stack([mass, mass * un + pi, mass * vt, un * (en + pi)])


def _edges_with_retry(build, a):
    a = np.array(a, dtype=float, copy=True)
    for _ in range(MAX_DOUBLINGS + 1):
        try:
            return build(a)
        except SubcharacteristicViolation as exc:
            a = np.where(exc.mask, 2.0 * a, a)
    raise StepFailure("subcharacteristic condition unresolved after doubling a")


def relax_step(field: Field, dt: float, variant: str = "multid",
               K: float = DEFAULT_K, gamma: float = 1.4) -> Field:
    """One conservative forward-Euler step with split or multi-d star states."""
    f = field.copy()
    fill_ghosts(f)
    prim = cons_to_prim(f.data, gamma)
    dx, dy = f.spec.dx, f.spec.dy
    a_x0, a_y0 = face_speeds(prim, gamma, variant, K)
    wlx, wrx = _face_states(prim, AXIS_X)
    wly, wry = _face_states(prim, AXIS_Y)

    if variant == "split":
        edge_x = _edges_with_retry(lambda a: relax_star_1d(wlx, wrx, a, gamma), a_x0)
        edge_y = _edges_with_retry(lambda a: relax_star_1d(wly, wry, a, gamma), a_y0)
    else:
        edge_x = _edges_with_retry(
            lambda a: _multid_edge(prim, wlx, wrx, a, AXIS_X, dx, dy, gamma), a_x0)
        edge_y = _edges_with_retry(
            lambda a: _multid_edge(prim, wly, wry, a, AXIS_Y, dx, dy, gamma), a_y0)

    fx = relax_interface_flux(edge_x, wlx, wrx, gamma)[:, 1:-1, 1:-1]
    fy = relax_interface_flux(edge_y, wly, wry, gamma)[:, 1:-1, 1:-1]
    qnew = f.interior.copy()
    qnew[RHO] -= (dt / dx) * diff_half(fx[0], AXIS_X) + (dt / dy) * diff_half(fy[0], AXIS_Y)
    qnew[MX] -= (dt / dx) * diff_half(fx[1], AXIS_X) + (dt / dy) * diff_half(fy[2], AXIS_Y)
    qnew[MY] -= (dt / dx) * diff_half(fx[2], AXIS_X) + (dt / dy) * diff_half(fy[1], AXIS_Y)
    qnew[EN] -= (dt / dx) * diff_half(fx[3], AXIS_X) + (dt / dy) * diff_half(fy[3], AXIS_Y)
    try:
        cons_to_prim(qnew, gamma)
    except InvalidState as exc:
        raise StepFailure(f"invalid state after step: {exc}") from exc
    out = Field.empty(field.spec)
    out.interior[:] = qnew
    out.time = field.time + dt
    return out
