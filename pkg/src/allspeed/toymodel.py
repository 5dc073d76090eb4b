"""Relaxation-toward-attractor toy model: the O(eps) transition time of
explicit and implicit time stepping toward a stiff equilibrium.

The model ODE is dq/dt + (q - attractor)/eps = 0, discretized with
dt = eps * tau.  Explicit stepping contracts by (1 - tau) per step,
implicit stepping by 1/(1 + tau); both reach half the initial distance
after a time proportional to eps.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np


@dataclass
class ToyRun:
    q0: float
    a: float
    eps: float
    tau: float
    n: int

    @property
    def dt(self) -> float:
        return self.eps * self.tau


def toy_explicit(run: ToyRun) -> np.ndarray:
    """Iterates q^0 .. q^n of q^{k+1} = q^k - tau (q^k - a).

    Warns (but still computes) outside the stability range 0 < tau < 2.
    """
    if not 0.0 < run.tau < 2.0:
        warnings.warn(f"explicit iteration unstable for tau = {run.tau}", stacklevel=2)
    out = np.empty(run.n + 1)
    out[0] = run.q0
    for k in range(run.n):
        out[k + 1] = out[k] - run.tau * (out[k] - run.a)
    return out


def toy_implicit(run: ToyRun) -> np.ndarray:
    """Iterates of the backward-Euler variant q^{k+1} = (q^k + tau a) / (1 + tau)."""
    if run.tau <= 0.0:
        raise ValueError("tau must be positive")
    out = np.empty(run.n + 1)
    out[0] = run.q0
    for k in range(run.n):
        out[k + 1] = (out[k] + run.tau * run.a) / (1.0 + run.tau)
    return out


def closed_form_explicit(run: ToyRun) -> np.ndarray:
    k = np.arange(run.n + 1)
    return (1.0 - run.tau) ** k * (run.q0 - run.a) + run.a


def closed_form_implicit(run: ToyRun) -> np.ndarray:
    k = np.arange(run.n + 1)
    return (1.0 + run.tau) ** (-k.astype(float)) * (run.q0 - run.a) + run.a


def half_life(sequence, dt: float, a: float = 0.0) -> float:
    """First time |q - a| falls to half its initial value, linearly interpolated."""
    d = np.abs(np.asarray(sequence, dtype=float) - a)
    target = 0.5 * d[0]
    below = np.nonzero(d <= target)[0]
    if len(below) == 0:
        raise ValueError("sequence never decays to half its initial distance")
    k = int(below[0])
    if k == 0:
        return 0.0
    return dt * (k - 1 + (d[k - 1] - target) / (d[k - 1] - d[k]))


def predicted_half_life(eps: float, tau: float) -> float:
    """eps tau log(1/2) / log|1 - tau| (the magnitude contracts by |1 - tau|)."""
    return eps * tau * np.log(0.5) / np.log(abs(1.0 - tau))
