"""2D Cartesian finite-volume solver for the compressible Euler equations.

Two classic one-dimensional schemes (a Lagrange-Projection method and a
Suliciu-type relaxation solver) are provided both in dimensionally split
form and in a truly multi-dimensional all-speed extension built on a
9-point discrete divergence.  A linear acoustics module with a von Neumann
stability analyzer, low-Mach diagnostics, benchmark problem generators and
independent verification oracles round out the package.
"""

from .grid import GridSpec, Field, InvalidState, StepFailure
from .driver import SchemeConfig, RunRecord, run

__all__ = [
    "GridSpec",
    "Field",
    "InvalidState",
    "StepFailure",
    "SchemeConfig",
    "RunRecord",
    "run",
]

__version__ = "0.1.0"
