"""Time integration (forward Euler), CFL control, run orchestration.

run() advances an initial field to t_end, emitting field dumps and
diagnostics at the configured cadences.  Failed steps (non-positive
compression factor, invalid state, unresolved subcharacteristic violation)
are retried with halved dt up to max_retries times; an unrecoverable
failure aborts the run with the last valid state dumped and the failure
recorded.

The Euler schemes default to the fused numba kernels; set fast=False to
step through the composed-stencil reference implementations instead (both
paths are equality-tested).  The acoustic schemes evolve the velocity and
pressure perturbations of the field linearly around its mean state.
"""

from __future__ import annotations

import os
import time as _time
from dataclasses import dataclass, field as _dc_field

import numpy as np

from . import kernels
from .acoustics import AcousticParams, AcousticState, acoustic_rhs_multid, acoustic_rhs_split
from .diagnostics import DiagnosticsRecord, CSV_COLUMNS, measure
from .grid import NG, Field, StepFailure, cons_to_prim, fill_ghosts, prim_to_cons, write_dump
from .lagrange import lp_step
from .relaxation import relax_step

SCHEMES = ("lp-split", "lp-multid", "relax-split", "relax-multid",
           "acoustic-split", "acoustic-multid")
EULER_SCHEMES = SCHEMES[:4]

_SCHEME_IDS = {"lp-split": kernels.LP_SPLIT, "lp-multid": kernels.LP_MULTID,
               "relax-split": kernels.RELAX_SPLIT, "relax-multid": kernels.RELAX_MULTID}


@dataclass
class SchemeConfig:
    scheme: str = "lp-multid"
    cfl: float = 0.9
    gamma: float = 1.4
    a_safety: float = 1.01
    t_end: float = 0.0
    dump_every: float = 0.0   # 0: dump only initial and final states
    diag_every: float = 0.0   # 0: measure only initial and final states
    eps_report: float = 1.0
    fast: bool = True
    max_retries: int = 10

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; choose from {SCHEMES}")
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must be in (0, 1], got {self.cfl}")
        if self.t_end < 0.0:
            raise ValueError("t_end must be non-negative")


@dataclass
class RunRecord:
    steps: int = 0
    retries: int = 0
    wall_time: float = 0.0
    records: list = _dc_field(default_factory=list)
    failure: str | None = None
    final_time: float = 0.0
    field: Field | None = None  # final (or last valid) state


def compute_dt(field: Field, cfl: float, gamma: float) -> float:
    """CFL timestep: cfl * min(dx, dy) / max over cells of max(|u|+c, |v|+c)."""
    prim = cons_to_prim(field.interior, gamma)
    c = np.sqrt(gamma * prim[3] / prim[0])
    smax = max(float(np.max(np.abs(prim[1]) + c)), float(np.max(np.abs(prim[2]) + c)))
    return cfl * min(field.spec.dx, field.spec.dy) / smax


def step_once(field: Field, dt: float, config: SchemeConfig) -> Field:
    """One forward-Euler step through the reference (composed) implementations."""
    if config.scheme.startswith("lp-"):
        return lp_step(field, dt, config.scheme[3:], config.a_safety, config.gamma)
    if config.scheme.startswith("relax-"):
        return relax_step(field, dt, config.scheme[6:], config.a_safety, config.gamma)
    raise ValueError(f"step_once does not handle scheme {config.scheme!r}")


def _advance_numpy(field: Field, t_stop: float, config: SchemeConfig, rec: RunRecord) -> Field:
    tol = 1e-13 * max(1.0, abs(t_stop))
    while field.time < t_stop - tol:
        dt = min(compute_dt(field, config.cfl, config.gamma), t_stop - field.time)
        attempts = 0
        while True:
            try:
                new = step_once(field, dt, config)
                break
            except StepFailure as exc:
                attempts += 1
                rec.retries += 1
                if attempts > config.max_retries:
                    raise StepFailure(f"unrecoverable step failure at t={field.time:.6g}: "
                                      f"{exc}") from exc
                dt *= 0.5
        field.data[:] = new.data
        field.time = new.time
        rec.steps += 1
    return field


def _advance_fast(field: Field, t_stop: float, config: SchemeConfig, rec: RunRecord) -> Field:
    t, steps, retries, status = kernels.advance_nb(
        field.data, config.gamma, config.a_safety, config.cfl,
        field.spec.dx, field.spec.dy,
        kernels.BC_CODES[field.spec.bc_x], kernels.BC_CODES[field.spec.bc_y],
        _SCHEME_IDS[config.scheme], field.time, t_stop,
        np.int64(2**62), config.max_retries)
    field.time = t
    rec.steps += steps
    rec.retries += retries
    if status != kernels.OK:
        names = {kernels.FAIL_COMPRESSION: "non-positive compression factor",
                 kernels.FAIL_STATE: "invalid state",
                 kernels.FAIL_SUBCHAR: "unresolved subcharacteristic violation"}
        raise StepFailure(f"unrecoverable step failure at t={t:.6g}: {names[status]}")
    return field


class _AcousticStepper:
    """Forward-Euler evolution of (u, v, p) perturbations around the mean state."""

    def __init__(self, field: Field, config: SchemeConfig):
        s = field.spec
        prim = cons_to_prim(field.interior, config.gamma)
        self.rho = prim[0].copy()
        c = float(np.sqrt(config.gamma * np.mean(prim[3]) / np.mean(prim[0])))
        self.params = AcousticParams(c, 1.0, s.dx, s.dy, s.bc_x, s.bc_y)
        self.state = AcousticState.from_interior(prim[1], prim[2], prim[3], self.params)
        self.rhs = acoustic_rhs_multid if config.scheme.endswith("multid") else acoustic_rhs_split
        self.config = config

    def advance(self, field: Field, t_stop: float, rec: RunRecord) -> Field:
        cfg = self.config
        dt_cfl = cfg.cfl * min(self.params.dx, self.params.dy) / self.params.c
        tol = 1e-13 * max(1.0, abs(t_stop))
        inner = (slice(NG, -NG), slice(NG, -NG))
        while field.time < t_stop - tol:
            dt = min(dt_cfl, t_stop - field.time)
            du, dv, dp = self.rhs(self.state, self.params)
            self.state.u[inner] += dt * du
            self.state.v[inner] += dt * dv
            self.state.p[inner] += dt * dp
            self.state.fill_ghosts(self.params)
            field.time += dt
            rec.steps += 1
        u, v, p = self.state.interior()
        field.interior[:] = prim_to_cons(np.stack([self.rho, u, v, p]), cfg.gamma)
        fill_ghosts(field)
        return field


def run(config: SchemeConfig, initial: Field, out_dir=None) -> RunRecord:
    """Advance the field to t_end, recording diagnostics and writing outputs."""
    rec = RunRecord()
    field = initial.copy()
    t0 = _time.perf_counter()
    dump_idx = 0
    diag_csv = None
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        diag_csv = open(os.path.join(out_dir, "diagnostics.csv"), "w")
        diag_csv.write(",".join(CSV_COLUMNS) + "\n")

    def emit_diag(f):
        r = measure(f, config.eps_report, config.gamma)
        rec.records.append(r)
        if diag_csv is not None:
            diag_csv.write(r.csv_row() + "\n")

    def emit_dump(f):
        nonlocal dump_idx
        if out_dir is not None:
            write_dump(f, os.path.join(out_dir, f"dump_{dump_idx:06d}.txt"))
            dump_idx += 1

    acoustic = None
    if config.scheme not in EULER_SCHEMES:
        acoustic = _AcousticStepper(field, config)

    emit_diag(field)
    emit_dump(field)
    tol = 1e-13 * max(1.0, config.t_end)
    try:
        next_dump = config.dump_every if config.dump_every > 0 else np.inf
        next_diag = config.diag_every if config.diag_every > 0 else np.inf
        while field.time < config.t_end - tol:
            t_stop = min(next_dump, next_diag, config.t_end)
            if acoustic is not None:
                field = acoustic.advance(field, t_stop, rec)
            elif config.fast:
                field = _advance_fast(field, t_stop, config, rec)
            else:
                field = _advance_numpy(field, t_stop, config, rec)
            if field.time >= next_diag - tol:
                emit_diag(field)
                next_diag += config.diag_every
            if field.time >= next_dump - tol:
                emit_dump(field)
                next_dump += config.dump_every
        if rec.records[-1].time < field.time - tol:
            emit_diag(field)
        if config.t_end > 0 and dump_idx < 2:
            emit_dump(field)  # final state when cadence produced none
    except StepFailure as exc:
        rec.failure = str(exc)
        if rec.records[-1].time < field.time - tol:
            emit_diag(field)
        emit_dump(field)  # last valid state
    finally:
        if diag_csv is not None:
            diag_csv.close()
    rec.final_time = field.time
    rec.wall_time = _time.perf_counter() - t0
    rec.field = field
    return rec
