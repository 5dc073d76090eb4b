"""Linear acoustics: split and truly multi-dimensional schemes, plus the
von Neumann stability analyzer of the multi-dimensional scheme.

The PDE is  d_t v + grad(p) / eps^2 = 0,  d_t p + c^2 div(v) = 0.  Both
semi-discrete right-hand sides operate on cell arrays padded with NG ghost
layers and return interior-shaped arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import NG, fill_ghost_scalar
from .stencil import (AXIS_X, AXIS_Y, diff_wide, second_diff, second_sum)


@dataclass
class AcousticParams:
    c: float
    eps: float = 1.0
    dx: float = 1.0
    dy: float = 1.0
    bc_x: str = "periodic"
    bc_y: str = "periodic"

    def __post_init__(self):
        if self.c <= 0 or self.eps <= 0:
            raise ValueError("sound speed and eps must be positive")


@dataclass
class AcousticState:
    """Velocity and pressure perturbations, ghost layers included."""

    u: np.ndarray
    v: np.ndarray
    p: np.ndarray

    @classmethod
    def from_interior(cls, u, v, p, params: AcousticParams) -> "AcousticState":
        def pad(a):
            out = np.zeros((a.shape[0] + 2 * NG, a.shape[1] + 2 * NG))
            out[NG:-NG, NG:-NG] = a
            return out

        st = cls(pad(np.asarray(u, float)), pad(np.asarray(v, float)), pad(np.asarray(p, float)))
        st.fill_ghosts(params)
        return st

    def fill_ghosts(self, params: AcousticParams) -> "AcousticState":
        fill_ghost_scalar(self.u, params.bc_x, params.bc_y, negate_x=True)
        fill_ghost_scalar(self.v, params.bc_x, params.bc_y, negate_y=True)
        fill_ghost_scalar(self.p, params.bc_x, params.bc_y)
        return self

    def interior(self):
        s = (slice(NG, -NG), slice(NG, -NG))
        return self.u[s], self.v[s], self.p[s]


def acoustic_rhs_split(state: AcousticState, params: AcousticParams):
    """Dimensionally split scheme: central gradients with 1D second-difference diffusion."""
    u, v, p = state.u, state.v, state.p
    c, eps, dx, dy = params.c, params.eps, params.dx, params.dy
    ix = (slice(1, -1), slice(NG, -NG))   # x-stencil ops shrink x by 2
    iy = (slice(NG, -NG), slice(1, -1))
    du = -diff_wide(p, AXIS_X)[ix] / (2 * dx * eps**2) \
        + (c / eps) * second_diff(u, AXIS_X)[ix] / (2 * dx)
    dv = -diff_wide(p, AXIS_Y)[iy] / (2 * dy * eps**2) \
        + (c / eps) * second_diff(v, AXIS_Y)[iy] / (2 * dy)
    dp = -c**2 * (diff_wide(u, AXIS_X)[ix] / (2 * dx) + diff_wide(v, AXIS_Y)[iy] / (2 * dy)) \
        + (c / eps) * (second_diff(p, AXIS_X)[ix] / (2 * dx)
                       + second_diff(p, AXIS_Y)[iy] / (2 * dy))
    return du, dv, dp


def acoustic_rhs_multid(state: AcousticState, params: AcousticParams):
    """Truly multi-dimensional 9-point scheme; stationary on the kernel of the
    discrete divergence with constant pressure."""
    u, v, p = state.u, state.v, state.p
    c, eps, dx, dy = params.c, params.eps, params.dx, params.dy
    w = (slice(1, -1), slice(1, -1))  # both-axis compositions shrink each axis by 2

    def ssy_dwx(q):   # {{ [q]_{i+-1} }}_{j+-1/2}
        return second_sum(diff_wide(q, AXIS_X), AXIS_Y)[w]

    def dwy_ssx(q):   # [ {{q}}_{i+-1/2} ]_{j+-1}
        return diff_wide(second_sum(q, AXIS_X), AXIS_Y)[w]

    def ssy_sdx(q):   # {{ [[q]]_{i+-1/2} }}_{j+-1/2}
        return second_sum(second_diff(q, AXIS_X), AXIS_Y)[w]

    def sdy_ssx(q):   # [[ {{q}}_{i+-1/2} ]]_{j+-1/2}
        return second_diff(second_sum(q, AXIS_X), AXIS_Y)[w]

    def dwy_dwx(q):   # [ [q]_{i+-1} ]_{j+-1}
        return diff_wide(diff_wide(q, AXIS_X), AXIS_Y)[w]

    du = -ssy_dwx(p) / (8 * dx * eps**2) \
        + (c / eps) * (ssy_sdx(u) / (8 * dx) + dwy_dwx(v) / (8 * dy))
    dv = -dwy_ssx(p) / (8 * dy * eps**2) \
        + (c / eps) * (dwy_dwx(u) / (8 * dx) + sdy_ssx(v) / (8 * dy))
    dp = -c**2 * (ssy_dwx(u) / (8 * dx) + dwy_ssx(v) / (8 * dy)) \
        + (c / eps) * (ssy_sdx(p) / (8 * dx) + sdy_ssx(p) / (8 * dy))
    return du, dv, dp


def acoustic_rhs_1d(u: np.ndarray, p: np.ndarray, params: AcousticParams):
    """The underlying 1D scheme (upwind acoustic Riemann solver) for reduction tests.

    u, p are 1D arrays with at least one ghost cell on each side; returns
    derivatives for entries 1..-1.
    """
    c, eps, dx = params.c, params.eps, params.dx
    du = -(p[2:] - p[:-2]) / (2 * dx * eps**2) \
        + (c / eps) * (u[2:] - 2 * u[1:-1] + u[:-2]) / (2 * dx)
    dp = -c**2 * (u[2:] - u[:-2]) / (2 * dx) \
        + (c / eps) * (p[2:] - 2 * p[1:-1] + p[:-2]) / (2 * dx)
    return du, dp


# ---------------------------------------------------------------------------
# von Neumann stability analysis
# ---------------------------------------------------------------------------

@dataclass
class AmplificationProbe:
    """Spectral data of the amplification matrix at one wavenumber pair."""

    beta_x: float
    beta_y: float
    dt: float
    eigenvalues: np.ndarray
    spectral_radius: float


def acoustic_jacobians(c: float):
    """Flux Jacobians of the symmetrized acoustic system in (u, v, p) ordering."""
    jx = np.array([[0.0, 0.0, c], [0.0, 0.0, 0.0], [c, 0.0, 0.0]])
    jy = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, c], [0.0, c, 0.0]])
    return jx, jy


def matrix_f(beta_x: float, beta_y: float, c: float) -> np.ndarray:
    """Diffusion-shape matrix f = 1 - sign(Jx) gx - sign(Jy) gy, gx = (tx-1)/(tx+1).

    Singular on the lines beta = +-pi; use matrix_fD for the regularized product.
    """
    jx, jy = acoustic_jacobians(c)
    tx, ty = np.exp(1j * beta_x), np.exp(1j * beta_y)
    return (np.eye(3, dtype=complex)
            - (jx / c) * (tx - 1.0) / (tx + 1.0)
            - (jy / c) * (ty - 1.0) / (ty + 1.0))


def matrix_D(beta_x: float, beta_y: float, c: float, dx: float, dy: float) -> np.ndarray:
    """Fourier symbol of the central 9-point derivative part of the scheme."""
    jx, jy = acoustic_jacobians(c)
    tx, ty = np.exp(1j * beta_x), np.exp(1j * beta_y)
    xx = (tx - 1.0) * (tx + 1.0) / (2.0 * tx * dx)
    yy = (1.0 + ty) ** 2 / (4.0 * ty)
    xy = (ty - 1.0) * (ty + 1.0) / (2.0 * ty * dy)
    yx = (1.0 + tx) ** 2 / (4.0 * tx)
    return jx * (xx * yy) + jy * (xy * yx)


def matrix_fD(beta_x: float, beta_y: float, c: float, dx: float, dy: float) -> np.ndarray:
    """Product f @ D with the (1+t) factors cancelled algebraically.

    Finite for every beta in [-pi, pi]^2, including the lines where f alone
    is singular.
    """
    jx, jy = acoustic_jacobians(c)
    tx, ty = np.exp(1j * beta_x), np.exp(1j * beta_y)
    xx = (tx * tx - 1.0) / (2.0 * tx * dx)
    xy = (ty * ty - 1.0) / (2.0 * ty * dy)
    yx = (1.0 + tx) ** 2 / (4.0 * tx)
    yy = (1.0 + ty) ** 2 / (4.0 * ty)
    gx_xx = (tx - 1.0) ** 2 / (2.0 * tx * dx)   # gx * xx
    gx_yx = (tx * tx - 1.0) / (4.0 * tx)        # gx * yx
    gy_xy = (ty - 1.0) ** 2 / (2.0 * ty * dy)   # gy * xy
    gy_yy = (ty * ty - 1.0) / (4.0 * ty)        # gy * yy
    return (jx * (xx * yy) + jy * (xy * yx)
            - (jx @ jx / c) * (gx_xx * yy) - (jx @ jy / c) * (gx_yx * xy)
            - (jy @ jx / c) * (gy_yy * xx) - (jy @ jy / c) * (gy_xy * yx))


def amplification_matrix(beta_x: float, beta_y: float, dt: float,
                         c: float = 1.0, dx: float = 1.0, dy: float = 1.0) -> AmplificationProbe:
    """Eigenvalues and spectral radius of A = 1 - dt * (f D) at one wavenumber pair."""
    amp = np.eye(3, dtype=complex) - dt * matrix_fD(beta_x, beta_y, c, dx, dy)
    eig = np.linalg.eigvals(amp)
    return AmplificationProbe(beta_x, beta_y, dt, eig, float(np.max(np.abs(eig))))


def stability_bound_f(beta_x, beta_y):
    """Timestep bound shape function 4 / (3 + cos bx + cos by - cos bx cos by).

    Returns +inf where the denominator vanishes (bx = by = +-pi).
    """
    cx, cy = np.cos(beta_x), np.cos(beta_y)
    den = 3.0 + cx + cy - cx * cy
    with np.errstate(divide="ignore"):
        return np.where(den > 0.0, 4.0 / np.where(den > 0.0, den, 1.0), np.inf)


def _matrix_fD_batch(bx: np.ndarray, by: np.ndarray, c: float, dx: float, dy: float):
    """matrix_fD evaluated on flat arrays of wavenumbers, shape (m, 3, 3)."""
    jx, jy = acoustic_jacobians(c)
    tx = np.exp(1j * bx)
    ty = np.exp(1j * by)
    xx = (tx * tx - 1.0) / (2.0 * tx * dx)
    xy = (ty * ty - 1.0) / (2.0 * ty * dy)
    yx = (1.0 + tx) ** 2 / (4.0 * tx)
    yy = (1.0 + ty) ** 2 / (4.0 * ty)
    gx_xx = (tx - 1.0) ** 2 / (2.0 * tx * dx)
    gx_yx = (tx * tx - 1.0) / (4.0 * tx)
    gy_xy = (ty - 1.0) ** 2 / (2.0 * ty * dy)
    gy_yy = (ty * ty - 1.0) / (4.0 * ty)
    terms = ((jx, xx * yy), (jy, xy * yx),
             (-jx @ jx / c, gx_xx * yy), (-jx @ jy / c, gx_yx * xy),
             (-jy @ jx / c, gy_yy * xx), (-jy @ jy / c, gy_xy * yx))
    out = np.zeros((bx.size, 3, 3), dtype=complex)
    for mat, coef in terms:
        out += coef[:, None, None] * mat[None, :, :]
    return out


def stability_scan(cfl: float, n: int, c: float = 1.0, dx: float = 1.0, threads: int = 1):
    """Spectral radius of A over an n x n grid of (beta_x, beta_y) in [-pi, pi]^2.

    dt is cfl * dx / c with dy = dx.  Returns (betas, radii) with radii of
    shape (n, n).  The eigenvalue problems are batched; threads > 1 splits
    the grid into row chunks evaluated concurrently.
    """
    betas = np.linspace(-np.pi, np.pi, n)
    dt = cfl * dx / c
    bx, by = np.meshgrid(betas, betas, indexing="ij")
    radii = np.empty((n, n))

    def fill_rows(rows):
        fd = _matrix_fD_batch(bx[rows].ravel(), by[rows].ravel(), c, dx, dx)
        amp = np.eye(3, dtype=complex)[None, :, :] - dt * fd
        radii[rows] = np.max(np.abs(np.linalg.eigvals(amp)), axis=1).reshape(len(rows), n)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        chunks = [range(k, n, threads) for k in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as ex:
            list(ex.map(fill_rows, chunks))
    else:
        fill_rows(range(n))
    return betas, radii
