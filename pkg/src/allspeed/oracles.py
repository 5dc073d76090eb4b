"""Independent ground-truth generators for tests and acceptance runs.

Nothing in the solver path imports this module; the exact Riemann solver,
the discrete-divergence null-space sampler and the radial reference solver
are self-contained so comparisons against them are genuinely independent
(the radial solver carries its own transcription of a 1D relaxation flux).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

K_REF = 1.05  # relaxation-speed safety factor of the radial reference solver


# ---------------------------------------------------------------------------
# exact Riemann solver (iterative star state, Toro-style)
# ---------------------------------------------------------------------------

@dataclass
class RiemannSolution:
    """Star state and wave structure of a 1D Riemann problem."""

    p_star: float
    u_star: float
    left_wave: str   # "shock" or "rarefaction"
    right_wave: str
    wl: tuple
    wr: tuple
    gamma: float

    def sample(self, xi: float):
        return _sample(self, xi)


def _wave_function(p, rho_k, p_k, c_k, gamma):
    """Toro's f_K(p) and its derivative: velocity change across one wave."""
    if p > p_k:  # shock
        ak = 2.0 / ((gamma + 1.0) * rho_k)
        bk = (gamma - 1.0) / (gamma + 1.0) * p_k
        fac = np.sqrt(ak / (p + bk))
        f = (p - p_k) * fac
        df = fac * (1.0 - 0.5 * (p - p_k) / (p + bk))
    else:  # rarefaction
        f = 2.0 * c_k / (gamma - 1.0) * ((p / p_k) ** ((gamma - 1.0) / (2.0 * gamma)) - 1.0)
        df = ((p / p_k) ** (-(gamma + 1.0) / (2.0 * gamma))) / (rho_k * c_k)
    return f, df


def solve_riemann(wl, wr, gamma: float = 1.4, tol: float = 1e-12,
                  max_iter: int = 200) -> RiemannSolution:
    """Iterate the star pressure of the Riemann problem ((rho, u, p) states)."""
    rho_l, u_l, p_l = wl
    rho_r, u_r, p_r = wr
    c_l = np.sqrt(gamma * p_l / rho_l)
    c_r = np.sqrt(gamma * p_r / rho_r)
    if 2.0 * (c_l + c_r) / (gamma - 1.0) <= u_r - u_l:
        raise ValueError("vacuum-generating data")
    # primitive-variable (PVRS) guess, floored away from zero
    p = max(0.5 * (p_l + p_r) - 0.125 * (u_r - u_l) * (rho_l + rho_r) * (c_l + c_r),
            tol * min(p_l, p_r))
    for _ in range(max_iter):
        fl, dfl = _wave_function(p, rho_l, p_l, c_l, gamma)
        fr, dfr = _wave_function(p, rho_r, p_r, c_r, gamma)
        dp = (fl + fr + u_r - u_l) / (dfl + dfr)
        p_new = p - dp
        if p_new <= 0.0:
            p_new = 0.5 * p
        if abs(p_new - p) <= tol * 0.5 * (p_new + p):
            p = p_new
            break
        p = p_new
    fl, _ = _wave_function(p, rho_l, p_l, c_l, gamma)
    fr, _ = _wave_function(p, rho_r, p_r, c_r, gamma)
    u = 0.5 * (u_l + u_r) + 0.5 * (fr - fl)
    return RiemannSolution(p, u, "shock" if p > p_l else "rarefaction",
                           "shock" if p > p_r else "rarefaction", tuple(wl), tuple(wr), gamma)


def _sample(sol: RiemannSolution, xi: float):
    g = sol.gamma
    p_star, u_star = sol.p_star, sol.u_star
    if xi <= u_star:  # left of the contact
        rho_k, u_k, p_k = sol.wl
        c_k = np.sqrt(g * p_k / rho_k)
        if sol.left_wave == "shock":
            rho_star = rho_k * ((p_star / p_k + (g - 1) / (g + 1))
                                / ((g - 1) / (g + 1) * p_star / p_k + 1.0))
            s = u_k - c_k * np.sqrt((g + 1) / (2 * g) * p_star / p_k + (g - 1) / (2 * g))
            return (rho_k, u_k, p_k) if xi <= s else (rho_star, u_star, p_star)
        head = u_k - c_k
        c_star = c_k * (p_star / p_k) ** ((g - 1) / (2 * g))
        tail = u_star - c_star
        if xi <= head:
            return (rho_k, u_k, p_k)
        if xi >= tail:
            return (rho_k * (p_star / p_k) ** (1 / g), u_star, p_star)
        c = (2 / (g + 1)) * (c_k + (g - 1) / 2 * (u_k - xi))
        u = (2 / (g + 1)) * (c_k + (g - 1) / 2 * u_k + xi)
        rho = rho_k * (c / c_k) ** (2 / (g - 1))
        return (rho, u, rho * c * c / g)
    rho_k, u_k, p_k = sol.wr
    c_k = np.sqrt(g * p_k / rho_k)
    if sol.right_wave == "shock":
        rho_star = rho_k * ((p_star / p_k + (g - 1) / (g + 1))
                            / ((g - 1) / (g + 1) * p_star / p_k + 1.0))
        s = u_k + c_k * np.sqrt((g + 1) / (2 * g) * p_star / p_k + (g - 1) / (2 * g))
        return (rho_k, u_k, p_k) if xi >= s else (rho_star, u_star, p_star)
    head = u_k + c_k
    c_star = c_k * (p_star / p_k) ** ((g - 1) / (2 * g))
    tail = u_star + c_star
    if xi >= head:
        return (rho_k, u_k, p_k)
    if xi <= tail:
        return (rho_k * (p_star / p_k) ** (1 / g), u_star, p_star)
    c = (2 / (g + 1)) * (c_k - (g - 1) / 2 * (u_k - xi))
    u = (2 / (g + 1)) * (-c_k + (g - 1) / 2 * u_k + xi)
    rho = rho_k * (c / c_k) ** (2 / (g - 1))
    return (rho, u, rho * c * c / g)


def exact_riemann_1d(wl, wr, gamma: float, xi: float):
    """Sampled primitive state (rho, u, p) of the exact solution at x/t = xi."""
    return solve_riemann(wl, wr, gamma).sample(xi)


# ---------------------------------------------------------------------------
# discrete-divergence null space on small periodic grids
# ---------------------------------------------------------------------------

def divergence_matrix(nx: int, ny: int, dx: float, dy: float) -> np.ndarray:
    """Dense matrix of the vertex divergence acting on (u, v) on a periodic grid."""
    n = nx * ny
    mat = np.zeros((n, 2 * n))

    def cell(i, j):
        return (i % nx) * ny + (j % ny)

    for i in range(nx):
        for j in range(ny):
            row = cell(i, j)  # vertex (i+1/2, j+1/2)
            for jj in (j, j + 1):
                mat[row, cell(i + 1, jj)] += 1.0 / (2 * dx)
                mat[row, cell(i, jj)] -= 1.0 / (2 * dx)
            for ii in (i, i + 1):
                mat[row, n + cell(ii, j + 1)] += 1.0 / (2 * dy)
                mat[row, n + cell(ii, j)] -= 1.0 / (2 * dy)
    return mat


@lru_cache(maxsize=16)
def _nullspace_basis_cached(nx, ny, dx, dy):
    mat = divergence_matrix(nx, ny, dx, dy)
    _, s, vh = np.linalg.svd(mat)
    rank = int(np.sum(s > 1e-10 * s[0]))
    basis = vh[rank:].T.copy()
    basis.setflags(write=False)
    return basis


def nullspace_basis(nx: int, ny: int, dx: float = 1.0, dy: float = 1.0) -> np.ndarray:
    """Orthonormal basis (2 nx ny, k) of discretely divergence-free velocities."""
    if nx > 16 or ny > 16:
        raise ValueError("null-space grids are capped at 16x16 (dense SVD)")
    return _nullspace_basis_cached(nx, ny, float(dx), float(dy))


def divergence_nullspace_sample(nx: int, ny: int, dx: float = 1.0, dy: float = 1.0,
                                seed: int = 0):
    """Random discretely divergence-free (u, v) cell fields, max-normalized.

    The sample is rechecked: its vertex divergence stays below 1e-12.
    """
    basis = nullspace_basis(nx, ny, dx, dy)
    rng = np.random.default_rng(seed)
    w = basis @ rng.standard_normal(basis.shape[1])
    w = w / np.max(np.abs(w))
    n = nx * ny
    u = w[:n].reshape(nx, ny)
    v = w[n:].reshape(nx, ny)
    resid = np.max(np.abs(divergence_matrix(nx, ny, dx, dy) @ w))
    if resid > 1e-12:
        raise AssertionError(f"null-space sample residual {resid:.3e}")
    return u, v


# ---------------------------------------------------------------------------
# radial reference solution (cylindrically symmetric 1D Euler)
# ---------------------------------------------------------------------------

def _suliciu_flux_1d(rho, u, p, e, gamma):
    """Self-contained 1D relaxation flux on all interior faces.

    Independent transcription used only by the reference solver; returns
    (mass, momentum, energy) face fluxes for cell arrays with one ghost cell
    on each side.
    """
    c = np.sqrt(gamma * p / rho)
    a = K_REF * np.maximum((rho * c)[:-1], (rho * c)[1:])
    rl, rr = rho[:-1], rho[1:]
    ul, ur = u[:-1], u[1:]
    pl, pr = p[:-1], p[1:]
    el, er = e[:-1], e[1:]
    du = ur - ul
    dp = pr - pl
    for _ in range(6):
        den_l = 1.0 + rl * du / (2 * a) - rl * dp / (2 * a * a)
        den_r = 1.0 + rr * du / (2 * a) + rr * dp / (2 * a * a)
        bad = (den_l <= 0) | (den_r <= 0)
        if not np.any(bad):
            break
        a = np.where(bad, 2 * a, a)
    u_star = 0.5 * (ul + ur) - dp / (2 * a)
    p_star = 0.5 * (pl + pr) - a * du / 2
    rho_sl = rl / den_l
    rho_sr = rr / den_r
    e_sl = rho_sl * (el / rl + (pl * ul - p_star * u_star) / a)
    e_sr = rho_sr * (er / rr + (p_star * u_star - pr * ur) / a)
    conds = [ul - a / rl > 0, u_star > 0, ur + a / rr > 0]
    rho_h = np.select(conds, [rl, rho_sl, rho_sr], default=rr)
    u_h = np.select(conds, [ul, u_star, u_star], default=ur)
    e_h = np.select(conds, [el, e_sl, e_sr], default=er)
    pi_h = np.select(conds, [pl, p_star, p_star], default=pr)
    mass = rho_h * u_h
    return mass, mass * u_h + pi_h, u_h * (e_h + pi_h)


def radial_reference_1d(n_fine: int = 4000, t_end: float = 0.1, r_jump: float = 0.3,
                        r_max: float = 0.75, gamma: float = 1.4,
                        inner=(1.0, 0.0, 1.0), outer=(0.125, 0.0, 0.1),
                        cfl: float = 0.45, geometric: bool = True):
    """Radially symmetric reference run; returns (r, rho, u_r, p) at t_end.

    The radial Euler equations with the cylindrical geometric source are
    advanced in the r-weighted conservative form (the source is applied by
    operator splitting after the flux step), so the weighted mass integral
    is conserved exactly.  The inner boundary reflects at r = dr/2;
    geometric=False drops the geometry for the planar sanity check.
    """
    dr = r_max / n_fine
    r = (np.arange(n_fine) + 0.5) * dr
    rho = np.where(r < r_jump, inner[0], outer[0])
    u = np.where(r < r_jump, inner[1], outer[1])
    p = np.where(r < r_jump, inner[2], outer[2])
    m = rho * u
    e = p / (gamma - 1) + 0.5 * rho * u * u
    t = 0.0
    r_faces = np.arange(n_fine + 1) * dr  # r = 0 face carries zero geometric weight
    while t < t_end - 1e-14:
        c = np.sqrt(gamma * p / rho)
        dt = min(cfl * dr / np.max(np.abs(u) + c), t_end - t)
        # ghost cells: reflective inner, zero-gradient outer
        rho_g = np.concatenate([[rho[0]], rho, [rho[-1]]])
        u_g = np.concatenate([[-u[0]], u, [u[-1]]])
        p_g = np.concatenate([[p[0]], p, [p[-1]]])
        e_g = np.concatenate([[e[0]], e, [e[-1]]])
        f_mass, f_mom, f_en = _suliciu_flux_1d(rho_g, u_g, p_g, e_g, gamma)
        if geometric:
            w = r_faces
            rho = rho - dt / (r * dr) * np.diff(w * f_mass)
            m = m - dt / (r * dr) * np.diff(w * f_mom) + dt * p / r
            e = e - dt / (r * dr) * np.diff(w * f_en)
        else:
            rho = rho - dt / dr * np.diff(f_mass)
            m = m - dt / dr * np.diff(f_mom)
            e = e - dt / dr * np.diff(f_en)
        u = m / rho
        p = (gamma - 1) * (e - 0.5 * rho * u * u)
        t += dt
    return r, rho, u, p
