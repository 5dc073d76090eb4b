"""Bracket/brace finite-difference calculus and the 9-point discrete divergence.

Five primitives act along one axis of a 2D array and shrink it:

    diff_half(q)    [q]_{i+1/2}  = q_{i+1} - q_i            (shrinks by 1)
    sum_half(q)     {q}_{i+1/2}  = q_{i+1} + q_i            (shrinks by 1)
    diff_wide(q)    [q]_{i+-1}   = q_{i+1} - q_{i-1}        (shrinks by 2)
    second_diff(q)  [[q]]        = q_{i+1} - 2 q_i + q_{i-1} (shrinks by 2)
    second_sum(q)   {{q}}        = q_{i+1} + 2 q_i + q_{i-1} (shrinks by 2)

Output index 0 is the first computable entry: face-centered results (the
*_half operators) sit between input cells k and k+1 at output index k;
cell-centered results (the wide operators) for input cell k sit at output
index k-1.  Operators along different axes commute and compose freely;
callers keep track of the alignment.
"""

from __future__ import annotations

import numpy as np

AXIS_X, AXIS_Y = 0, 1


def diff_half(q: np.ndarray, axis: int) -> np.ndarray:
    q = np.asarray(q)
    if axis == AXIS_X:
        return q[1:, ...] - q[:-1, ...]
    return q[:, 1:] - q[:, :-1]


def sum_half(q: np.ndarray, axis: int) -> np.ndarray:
    q = np.asarray(q)
    if axis == AXIS_X:
        return q[1:, ...] + q[:-1, ...]
    return q[:, 1:] + q[:, :-1]


def diff_wide(q: np.ndarray, axis: int) -> np.ndarray:
    q = np.asarray(q)
    if axis == AXIS_X:
        return q[2:, ...] - q[:-2, ...]
    return q[:, 2:] - q[:, :-2]


def second_diff(q: np.ndarray, axis: int) -> np.ndarray:
    q = np.asarray(q)
    if axis == AXIS_X:
        return q[2:, ...] - 2.0 * q[1:-1, ...] + q[:-2, ...]
    return q[:, 2:] - 2.0 * q[:, 1:-1] + q[:, :-2]


def second_sum(q: np.ndarray, axis: int) -> np.ndarray:
    q = np.asarray(q)
    if axis == AXIS_X:
        return q[2:, ...] + 2.0 * q[1:-1, ...] + q[:-2, ...]
    return q[:, 2:] + 2.0 * q[:, 1:-1] + q[:, :-2]


def discrete_divergence(u: np.ndarray, v: np.ndarray, dx: float, dy: float) -> np.ndarray:
    """Vertex-centered divergence on the 2x2 cell block around each corner.

    D_{i+1/2,j+1/2} = {[u]_{i+1/2}}_{j+1/2} / (2 dx) + [{v}_{i+1/2}]_{j+1/2} / (2 dy)

    Input cell arrays of shape (nx, ny) give a vertex array of shape
    (nx-1, ny-1); vertex (i+1/2, j+1/2) sits at output index (i, j).
    """
    term_u = sum_half(diff_half(u, AXIS_X), AXIS_Y)
    term_v = diff_half(sum_half(v, AXIS_X), AXIS_Y)
    return term_u / (2.0 * dx) + term_v / (2.0 * dy)


def central_divergence(u: np.ndarray, v: np.ndarray, dx: float, dy: float) -> np.ndarray:
    """Cell-centered divergence [u]_{i+-1} / (2 dx) + [v]_{j+-1} / (2 dy).

    Shrinks both axes by 2; cell (i, j) of the input sits at output
    index (i-1, j-1).
    """
    return diff_wide(u, AXIS_X)[:, 1:-1] / (2.0 * dx) + diff_wide(v, AXIS_Y)[1:-1, :] / (2.0 * dy)
