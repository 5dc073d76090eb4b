"""Grid geometry, Euler state conversions and ghost-cell boundaries.

Fields are stored as arrays of shape (4, nx + 2*NG, ny + 2*NG) with the
component as the leading axis.  Conserved components are (rho, rho*u,
rho*v, e); primitive components are (rho, u, v, p).  The ghost layer is
NG = 2 wide: the 9-point multi-dimensional stencils need one halo cell and
the Lagrange-Projection predictor needs values one further ring out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NG = 2

# component indices shared by conserved and primitive arrays
RHO, MX, MY, EN = 0, 1, 2, 3
U, V, P = 1, 2, 3

BC_KINDS = ("periodic", "zero-gradient", "wall")


class InvalidState(ValueError):
    """A state with non-positive density or pressure."""

    def __init__(self, message: str, index=None):
        if index is not None:
            message = f"{message} at cell {index}"
        super().__init__(message)
        self.index = index


class StepFailure(RuntimeError):
    """A time step produced an unusable state; the caller may retry with a smaller dt."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform Cartesian grid: cell counts, cell widths, origin and boundary kinds."""

    nx: int
    ny: int
    dx: float
    dy: float
    x0: float = 0.0
    y0: float = 0.0
    bc_x: str = "periodic"
    bc_y: str = "periodic"

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise ValueError(f"grid needs nx, ny >= 3, got {self.nx} x {self.ny}")
        if self.dx <= 0 or self.dy <= 0:
            raise ValueError(f"cell widths must be positive, got dx={self.dx}, dy={self.dy}")
        if self.bc_x not in BC_KINDS or self.bc_y not in BC_KINDS:
            raise ValueError(f"boundary kind must be one of {BC_KINDS}")

    @property
    def shape(self):
        """Padded array shape (nx + 2*NG, ny + 2*NG)."""
        return (self.nx + 2 * NG, self.ny + 2 * NG)

    def cell_centers(self):
        """Coordinates of interior cell centers as broadcastable (x[:, None], y[None, :])."""
        x = self.x0 + (np.arange(self.nx) + 0.5) * self.dx
        y = self.y0 + (np.arange(self.ny) + 0.5) * self.dy
        return x[:, None], y[None, :]


@dataclass
class Field:
    """Cell-centered conserved states on a grid, ghost layers included."""

    spec: GridSpec
    data: np.ndarray  # (4, nx + 2*NG, ny + 2*NG)
    time: float = 0.0

    @classmethod
    def empty(cls, spec: GridSpec) -> "Field":
        return cls(spec, np.zeros((4,) + spec.shape))

    @classmethod
    def from_primitive(cls, spec: GridSpec, w: np.ndarray, gamma: float) -> "Field":
        """Build a field from interior primitive data of shape (4, nx, ny)."""
        f = cls.empty(spec)
        f.interior[:] = prim_to_cons(w, gamma)
        fill_ghosts(f)
        return f

    @property
    def interior(self) -> np.ndarray:
        return self.data[:, NG:-NG, NG:-NG]

    def copy(self) -> "Field":
        return Field(self.spec, self.data.copy(), self.time)

    def conserved_totals(self) -> np.ndarray:
        """Interior sums of each conserved component times the cell area."""
        area = self.spec.dx * self.spec.dy
        return self.interior.sum(axis=(1, 2)) * area


def cons_to_prim(q: np.ndarray, gamma: float) -> np.ndarray:
    """Convert conserved (rho, rho*u, rho*v, e) to primitive (rho, u, v, p).

    Raises InvalidState (carrying the offending index) on non-positive
    density or pressure.
    """
    q = np.asarray(q, dtype=float)
    rho = q[RHO]
    _check_positive(rho, "density")
    u = q[MX] / rho
    v = q[MY] / rho
    p = (gamma - 1.0) * (q[EN] - 0.5 * (q[MX] * u + q[MY] * v))
    _check_positive(p, "pressure")
    return np.stack([rho, u, v, p])


def prim_to_cons(w: np.ndarray, gamma: float) -> np.ndarray:
    """Convert primitive (rho, u, v, p) to conserved (rho, rho*u, rho*v, e)."""
    w = np.asarray(w, dtype=float)
    rho, u, v, p = w[RHO], w[U], w[V], w[P]
    _check_positive(rho, "density")
    _check_positive(p, "pressure")
    e = p / (gamma - 1.0) + 0.5 * rho * (u * u + v * v)
    return np.stack([rho, rho * u, rho * v, e])


def sound_speed_and_mach(w: np.ndarray, gamma: float):
    """Sound speed sqrt(gamma p / rho) and local Mach number |v| / c."""
    w = np.asarray(w, dtype=float)
    c = np.sqrt(gamma * w[P] / w[RHO])
    mach = np.sqrt(w[U] ** 2 + w[V] ** 2) / c
    return c, mach


def _check_positive(arr, name):
    bad = ~(np.asarray(arr) > 0.0)
    if np.any(bad):
        idx = tuple(int(k) for k in np.argwhere(bad)[0])
        raise InvalidState(f"non-positive {name} ({np.asarray(arr)[idx]:.6g})", index=idx)


def fill_ghost_scalar(arr: np.ndarray, bc_x: str, bc_y: str,
                      negate_x: bool = False, negate_y: bool = False) -> np.ndarray:
    """Fill the NG-wide ghost frame of a 2D scalar array in place.

    The x sweep runs first, then the y sweep copies full rows including the
    freshly filled x ghosts, which makes the corners consistent.  For wall
    boundaries the mirrored values are negated when negate_* is set (normal
    velocity or momentum components).
    """
    nx = arr.shape[0] - 2 * NG
    ny = arr.shape[1] - 2 * NG
    sx = -1.0 if (bc_x == "wall" and negate_x) else 1.0
    if bc_x == "periodic":
        arr[:NG, :] = arr[nx:nx + NG, :]
        arr[NG + nx:, :] = arr[NG:2 * NG, :]
    elif bc_x == "zero-gradient":
        arr[:NG, :] = arr[NG, :]
        arr[NG + nx:, :] = arr[NG + nx - 1, :]
    else:  # wall: mirror about the boundary face
        for m in range(NG):
            arr[NG - 1 - m, :] = sx * arr[NG + m, :]
            arr[NG + nx + m, :] = sx * arr[NG + nx - 1 - m, :]
    sy = -1.0 if (bc_y == "wall" and negate_y) else 1.0
    if bc_y == "periodic":
        arr[:, :NG] = arr[:, ny:ny + NG]
        arr[:, NG + ny:] = arr[:, NG:2 * NG]
    elif bc_y == "zero-gradient":
        arr[:, :NG] = arr[:, NG][:, None]
        arr[:, NG + ny:] = arr[:, NG + ny - 1][:, None]
    else:
        for m in range(NG):
            arr[:, NG - 1 - m] = sy * arr[:, NG + m]
            arr[:, NG + ny + m] = sy * arr[:, NG + ny - 1 - m]
    return arr


def fill_ghosts(f: Field) -> Field:
    """Fill all ghost cells of a field according to its boundary kinds."""
    for comp in range(4):
        fill_ghost_scalar(f.data[comp], f.spec.bc_x, f.spec.bc_y,
                          negate_x=(comp == MX), negate_y=(comp == MY))
    return f


def write_dump(f: Field, path) -> None:
    """Write the plain-text field dump.

    Header line "nx ny dx dy x0 y0 time", then one row per interior cell
    "i j rho rho_u rho_v e", row-major (i outer).
    """
    s = f.spec
    q = f.interior
    with open(path, "w") as fh:
        fh.write(f"{s.nx} {s.ny} {s.dx!r} {s.dy!r} {s.x0!r} {s.y0!r} {float(f.time)!r}\n")
        for i in range(s.nx):
            for j in range(s.ny):
                fh.write(f"{i} {j} {float(q[RHO, i, j])!r} {float(q[MX, i, j])!r} "
                         f"{float(q[MY, i, j])!r} {float(q[EN, i, j])!r}\n")


def read_dump(path, bc_x: str = "periodic", bc_y: str = "periodic") -> Field:
    """Read a field dump written by write_dump."""
    with open(path) as fh:
        head = fh.readline().split()
        nx, ny = int(head[0]), int(head[1])
        dx, dy, x0, y0, time = (float(t) for t in head[2:7])
        spec = GridSpec(nx, ny, dx, dy, x0, y0, bc_x, bc_y)
        f = Field.empty(spec)
        f.time = time
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            i, j = int(parts[0]), int(parts[1])
            f.interior[:, i, j] = [float(t) for t in parts[2:6]]
    fill_ghosts(f)
    return f
