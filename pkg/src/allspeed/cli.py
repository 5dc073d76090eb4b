"""Command-line entry point: config parsing, run dispatch, output layout.

Subcommands:

    run              advance a problem, writing field dumps + diagnostics CSV
    stability-scan   spectral radius of the acoustic amplification matrix
    toy              relaxation toy-model iterate history
    sample-nullspace draw a discretely divergence-free velocity sample
    riemann          exact 1D Riemann solution sampled at x/t

Config files are flat "key = value" lines; [section] headers are allowed
for organization and '#' starts a comment.  Command-line flags override
config-file values.  ALLSPEED_THREADS caps worker parallelism of the
stability scan.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from .acoustics import stability_scan
from .diagnostics import radial_scatter, write_scatter_csv
from .driver import SCHEMES, SchemeConfig, run
from .oracles import divergence_nullspace_sample, exact_riemann_1d, solve_riemann
from .problems import PROBLEMS, ProblemSpec, build_problem
from .toymodel import ToyRun, toy_explicit, toy_implicit


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    problem: str = ""
    scheme: str = ""
    nx: int = 50
    ny: int = 50
    eps: float = 1.0
    cfl: float = 0.9
    gamma: float = 1.4
    a_safety: float = 1.01
    t_end: float = 0.0
    out: str | None = None
    dump_every: float = 0.0
    diag_every: float = 0.0
    seed: int = 0
    fast: bool = True

    def scheme_config(self) -> SchemeConfig:
        return SchemeConfig(scheme=self.scheme, cfl=self.cfl, gamma=self.gamma,
                            a_safety=self.a_safety, t_end=self.t_end,
                            dump_every=self.dump_every, diag_every=self.diag_every,
                            eps_report=self.eps, fast=self.fast)


_REQUIRED_KEYS = ("problem", "scheme")
_PARSERS = {
    "problem": str, "scheme": str, "out": str,
    "nx": int, "ny": int, "seed": int,
    "eps": float, "cfl": float, "gamma": float, "a_safety": float,
    "t_end": float, "dump_every": float, "diag_every": float,
    "fast": lambda s: s.lower() in ("1", "true", "yes"),
}


def parse_config(text: str) -> RunConfig:
    """Parse "key = value" config text into a RunConfig with defaults applied."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and line.endswith("]")):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {value!r}") from exc
    missing = [k for k in _REQUIRED_KEYS if k not in values]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    cfg = RunConfig(**values)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    if cfg.problem not in PROBLEMS:
        raise ConfigError(f"unknown problem {cfg.problem!r}; valid: {', '.join(sorted(PROBLEMS))}")
    if cfg.scheme not in SCHEMES:
        raise ConfigError(f"unknown scheme {cfg.scheme!r}; valid: {', '.join(SCHEMES)}")


def max_threads() -> int:
    try:
        return max(1, int(os.environ.get("ALLSPEED_THREADS", "1")))
    except ValueError:
        return 1


def _cmd_run(args) -> int:
    if args.config:
        with open(args.config) as fh:
            cfg = parse_config(fh.read())
    else:
        cfg = RunConfig()
    for key in ("problem", "scheme", "nx", "ny", "eps", "cfl", "t_end",
                "out", "dump_every", "diag_every"):
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            setattr(cfg, key, val)
    if not cfg.problem or not cfg.scheme:
        raise ConfigError("missing required keys: " +
                          ", ".join(k for k in _REQUIRED_KEYS if not getattr(cfg, k)))
    _validate(cfg)
    field = build_problem(ProblemSpec(cfg.problem, cfg.nx, cfg.ny, cfg.eps, cfg.gamma))
    out_dir = cfg.out or "out"
    rec = run(cfg.scheme_config(), field, out_dir=out_dir)
    if cfg.problem == "radial-sod" and rec.field is not None:
        write_scatter_csv(os.path.join(out_dir, "radial_scatter.csv"),
                          radial_scatter(rec.field, gamma=cfg.gamma))
    print(f"{cfg.scheme} on {cfg.problem}: {rec.steps} steps to t={rec.final_time:.6g} "
          f"({rec.wall_time:.2f}s, {rec.retries} retries)")
    if rec.failure:
        print(f"run failed: {rec.failure}", file=sys.stderr)
        return 1
    return 0


def _cmd_stability_scan(args) -> int:
    betas, radii = stability_scan(args.cfl, args.n, threads=max_threads())
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        out.write("beta_x,beta_y,spectral_radius\n")
        for i, bx in enumerate(betas):
            for j, by in enumerate(betas):
                out.write(f"{float(bx)!r},{float(by)!r},{float(radii[i, j])!r}\n")
    finally:
        if args.out:
            out.close()
    print(f"max spectral radius at CFL={args.cfl}: {np.max(radii):.15g}", file=sys.stderr)
    return 0


def _cmd_toy(args) -> int:
    n = args.n or max(64, int(8.0 / args.tau) + 1)
    run_ = ToyRun(q0=args.q0, a=args.a, eps=args.eps, tau=args.tau, n=n)
    seq = toy_implicit(run_) if args.implicit else toy_explicit(run_)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        out.write("n,t,q\n")
        for k, q in enumerate(seq):
            out.write(f"{k},{float(k * run_.dt)!r},{float(q)!r}\n")
    finally:
        if args.out:
            out.close()
    return 0


def _cmd_sample_nullspace(args) -> int:
    u, v = divergence_nullspace_sample(args.nx, args.ny, seed=args.seed)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        out.write("i,j,u,v\n")
        for i in range(args.nx):
            for j in range(args.ny):
                out.write(f"{i},{j},{float(u[i, j])!r},{float(v[i, j])!r}\n")
    finally:
        if args.out:
            out.close()
    return 0


def _cmd_riemann(args) -> int:
    wl = tuple(float(t) for t in args.left.split(","))
    wr = tuple(float(t) for t in args.right.split(","))
    if len(wl) != 3 or len(wr) != 3:
        raise ConfigError("states are rho,u,p triples")
    sol = solve_riemann(wl, wr, args.gamma)
    rho, u, p = exact_riemann_1d(wl, wr, args.gamma, args.xi)
    print(f"p_star={float(sol.p_star)!r} u_star={float(sol.u_star)!r} "
          f"waves=({sol.left_wave},{sol.right_wave})")
    print(f"state at x/t={args.xi}: rho={float(rho)!r} u={float(u)!r} p={float(p)!r}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="allspeed",
                                 description="all-speed finite-volume Euler solver")
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="advance a problem and write outputs")
    p_run.add_argument("--config", help="config file of 'key = value' lines")
    p_run.add_argument("--problem", choices=sorted(PROBLEMS))
    p_run.add_argument("--scheme", choices=SCHEMES)
    p_run.add_argument("--nx", type=int)
    p_run.add_argument("--ny", type=int)
    p_run.add_argument("--eps", type=float)
    p_run.add_argument("--cfl", type=float)
    p_run.add_argument("--t-end", dest="t_end", type=float)
    p_run.add_argument("--out")
    p_run.add_argument("--dump-every", dest="dump_every", type=float)
    p_run.add_argument("--diag-every", dest="diag_every", type=float)
    p_run.set_defaults(func=_cmd_run)

    p_scan = sub.add_parser("stability-scan", help="beta-grid spectral radius CSV")
    p_scan.add_argument("--cfl", type=float, default=1.0)
    p_scan.add_argument("--n", type=int, default=64)
    p_scan.add_argument("--out")
    p_scan.set_defaults(func=_cmd_stability_scan)

    p_toy = sub.add_parser("toy", help="stiff-relaxation toy model CSV")
    p_toy.add_argument("--tau", type=float, required=True)
    p_toy.add_argument("--eps", type=float, required=True)
    p_toy.add_argument("--q0", type=float, default=1.0)
    p_toy.add_argument("--a", type=float, default=0.0)
    p_toy.add_argument("--n", type=int)
    p_toy.add_argument("--implicit", action="store_true")
    p_toy.add_argument("--out")
    p_toy.set_defaults(func=_cmd_toy)

    p_ns = sub.add_parser("sample-nullspace", help="divergence-free velocity sample CSV")
    p_ns.add_argument("--nx", type=int, default=12)
    p_ns.add_argument("--ny", type=int, default=12)
    p_ns.add_argument("--seed", type=int, default=0)
    p_ns.add_argument("--out")
    p_ns.set_defaults(func=_cmd_sample_nullspace)

    p_rp = sub.add_parser("riemann", help="exact Riemann solution at x/t")
    p_rp.add_argument("--left", required=True, help="rho,u,p")
    p_rp.add_argument("--right", required=True, help="rho,u,p")
    p_rp.add_argument("--xi", type=float, default=0.0)
    p_rp.add_argument("--gamma", type=float, default=1.4)
    p_rp.set_defaults(func=_cmd_riemann)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
