"""Command-line front end.

    lucas-uzawa bgp      --params p.json
    lucas-uzawa simulate --params p.json --family General2 --k0 1 --h0 0.2 --t-max 50 --steps 51
    lucas-uzawa verify   --params p.json --family General3 --k0 1 --h0 0.2 --tol 1e-6
    lucas-uzawa growth   --params p.json --family General2 --k0 1 --h0 0.2
    lucas-uzawa compare  --params p.json --family General1,General2 --k0 1 --h0 0.2

Exit codes: 0 success / verified, 1 verification failed, 2 invalid input,
3 integration constants could not be derived.
"""
from __future__ import annotations

import argparse
import io
import itertools
import json
import logging
import sys
from dataclasses import dataclass

import numpy as np

from .bgp import bgp_summary
from .closed_form import SolutionFamily, TrajectoryPoint, closure, derive_constants, evaluate
from .errors import (EvalDomain, InvalidParams, NoRoot, NonConvergent, NonPositiveState,
                     SigmaBetaMismatch, WindowViolated)
from .foc import residual_report
from .growth import RATE_NAMES, growth_rates
from .params import load_params

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_DERIVE = 0, 1, 2, 3

_CORRUPT_ALIASES = {
    "c": "c", "k": "k", "h": "h_star", "h_star": "h_star", "u": "u",
    "lambda": "lam", "lam": "lam", "mu": "mu_star", "mu_star": "mu_star",
}


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    params_path: str
    family: str
    k0: float | None
    h0: float | None
    t_max: float
    steps: int
    tol: float
    out_path: str | None
    format: str

    def validate(self) -> None:
        if not self.t_max > 0:
            raise InputError("--t-max must be positive")
        if self.steps < 2:
            raise InputError("--steps must be at least 2")
        if not self.tol > 0:
            raise InputError("--tol must be positive")

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.steps)


def _fmt(x) -> str:
    return "%.17g" % x


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(columns, rows, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(columns, map(float, r))) for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for r in rows:
        buf.write(",".join(_fmt(v) for v in r) + "\n")
    return buf.getvalue()


def _families(text: str) -> list[SolutionFamily]:
    out = []
    for name in text.split(","):
        try:
            out.append(SolutionFamily(name.strip()))
        except ValueError:
            raise InputError(f"unknown family {name!r}; choose from "
                             + ", ".join(f.value for f in SolutionFamily)) from None
    return out


def _constants(family: SolutionFamily, p, cfg: RunConfig):
    k0 = 1.0 if cfg.k0 is None else cfg.k0
    if family.needs_h0 and cfg.h0 is None:
        raise InputError(f"--h0 is required for {family.value}")
    return derive_constants(family, p, k0, cfg.h0)


def cmd_bgp(cfg: RunConfig) -> int:
    p = load_params(cfg.params_path)
    text = json.dumps(bgp_summary(p).as_dict(), indent=1) + "\n"
    _emit(text, cfg.out_path)
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    p = load_params(cfg.params_path)
    (family,) = _families(cfg.family)
    consts = _constants(family, p, cfg)
    pt = evaluate(family, consts, p, cfg.grid)
    rows = np.column_stack([np.asarray(pt.column(c), dtype=float) for c in TrajectoryPoint.COLUMNS])
    if cfg.format == "json":
        doc = {
            "family": family.value,
            "constants": consts.as_dict(),
            "trajectory": [dict(zip(TrajectoryPoint.COLUMNS, map(float, r))) for r in rows],
        }
        _emit(json.dumps(doc, indent=1) + "\n", cfg.out_path)
    else:
        _emit(_table(TrajectoryPoint.COLUMNS, rows, "csv"), cfg.out_path)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, corrupt: dict | None = None, fd_step: float = 1e-4) -> int:
    p = load_params(cfg.params_path)
    (family,) = _families(cfg.family)
    consts = _constants(family, p, cfg)
    report = residual_report(closure(family, consts, p, corrupt=corrupt), p, cfg.grid, fd_step)
    passed = report.passed(cfg.tol)
    doc = {"family": family.value, "tol": cfg.tol, "passed": passed, **report.as_dict()}
    _emit(json.dumps(doc, indent=1) + "\n", cfg.out_path)
    return EXIT_OK if passed else EXIT_FAILED


def _rates_table(family, p, cfg) -> np.ndarray:
    consts = _constants(family, p, cfg)
    g = growth_rates(family, consts, p, cfg.grid)
    return np.column_stack([np.broadcast_to(np.asarray(getattr(g, n), dtype=float), cfg.grid.shape)
                            for n in RATE_NAMES])


def cmd_growth(cfg: RunConfig) -> int:
    p = load_params(cfg.params_path)
    (family,) = _families(cfg.family)
    rates = _rates_table(family, p, cfg)
    rows = np.column_stack([cfg.grid, rates])
    _emit(_table(("t",) + RATE_NAMES, rows, cfg.format), cfg.out_path)
    return EXIT_OK


def cmd_compare(cfg: RunConfig) -> int:
    p = load_params(cfg.params_path)
    families = _families(cfg.family)
    if len(families) < 2:
        raise InputError("compare needs at least two comma-separated families")
    tables = {f: _rates_table(f, p, cfg) for f in families}
    columns = ["t"]
    blocks = [cfg.grid[:, None]]
    for f in families:
        columns += [f"{f.value}_{n}" for n in RATE_NAMES]
        blocks.append(tables[f])
    for fi, fj in itertools.combinations(families, 2):
        columns += [f"gap_{fi.value}_{fj.value}_{n}" for n in RATE_NAMES]
        blocks.append(np.abs(tables[fi] - tables[fj]))
    _emit(_table(columns, np.hstack(blocks), cfg.format), cfg.out_path)
    return EXIT_OK


def _parse_corrupt(text: str | None) -> dict | None:
    if not text:
        return None
    name, _, factor = text.partition(":")
    if name not in _CORRUPT_ALIASES:
        raise InputError(f"--corrupt column must be one of {sorted(_CORRUPT_ALIASES)}")
    return {_CORRUPT_ALIASES[name]: float(factor) if factor else 1.01}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lucas-uzawa",
        description="Closed-form paths of the Lucas-Uzawa model with externalities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    defaults = {
        "bgp": dict(t_max=50.0, steps=51),
        "simulate": dict(t_max=50.0, steps=51),
        "verify": dict(t_max=50.0, steps=101),
        "growth": dict(t_max=50.0, steps=51),
        "compare": dict(t_max=50.0, steps=51),
    }
    for name, d in defaults.items():
        sp = sub.add_parser(name)
        sp.add_argument("--params", required=True, help="JSON file with the seven parameters")
        sp.add_argument("--family", default="General1",
                        help="solution family (compare: comma-separated list)")
        sp.add_argument("--k0", type=float, default=None, help="initial physical capital (default 1)")
        sp.add_argument("--h0", type=float, default=None, help="initial human capital")
        sp.add_argument("--t-max", type=float, default=d["t_max"])
        sp.add_argument("--steps", type=int, default=d["steps"], help="number of grid points")
        sp.add_argument("--tol", type=float, default=1e-6, help="verification threshold")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        if name == "verify":
            sp.add_argument("--fd-step", type=float, default=1e-4)
            sp.add_argument("--corrupt", default=None, metavar="COLUMN[:FACTOR]",
                            help="fault injection: scale one state column (default factor 1.01)")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        params_path=args.params, family=args.family, k0=args.k0, h0=args.h0,
        t_max=args.t_max, steps=args.steps, tol=args.tol, out_path=args.out,
        format=args.format,
    )
    try:
        cfg.validate()
        if args.command == "bgp":
            return cmd_bgp(cfg)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, corrupt=_parse_corrupt(args.corrupt), fd_step=args.fd_step)
        if args.command == "growth":
            return cmd_growth(cfg)
        return cmd_compare(cfg)
    except (InputError, InvalidParams, WindowViolated, SigmaBetaMismatch, NonPositiveState,
            OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NoRoot, NonConvergent, EvalDomain) as exc:
        print(f"error: could not derive the solution: {exc}", file=sys.stderr)
        return EXIT_DERIVE


if __name__ == "__main__":
    sys.exit(main())
