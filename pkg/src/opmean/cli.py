"""Command-line front end: ``opmean {mean,verify,counterexample}``.

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 precondition
violated, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import (
    DimensionMismatch,
    DomainError,
    LinearMean,
    NotHermitian,
    NotPositiveDefinite,
    NumericalFailure,
    PreconditionViolated,
    SpecParseError,
)
from .hermitian import load_matrix, matrix_to_json
from .inequalities import reproduce_counterexample
from .means import evaluate_mean, parse_mean_spec
from .trials import DEFAULT_TOLERANCES, SUITES, RunConfig, run

DEFAULT_SEED = 20250101
SEED_ENV = "OPMEAN_SEED"
MAX_DIM = 64

EXIT_OK, EXIT_FAILURE, EXIT_INPUT, EXIT_PRECONDITION, EXIT_NUMERICAL = 0, 1, 2, 3, 4


class _InputError(Exception):
    pass


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be nonnegative")
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _dims(text: str) -> tuple:
    lo, sep, hi = text.partition("..")
    try:
        lo_i, hi_i = (int(lo), int(hi)) if sep else (int(text), int(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must look like LO..HI, got {text!r}") from None
    if not 1 <= lo_i <= hi_i <= MAX_DIM:
        raise argparse.ArgumentTypeError(f"dims must satisfy 1 <= LO <= HI <= {MAX_DIM}")
    return lo_i, hi_i


def _tol(text: str) -> tuple:
    name, sep, value = text.partition("=")
    if not sep or name not in DEFAULT_TOLERANCES:
        raise argparse.ArgumentTypeError(
            f"expected NAME=VALUE with NAME in {', '.join(sorted(DEFAULT_TOLERANCES))}, got {text!r}"
        )
    try:
        v = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {name} needs a number, got {value!r}") from None
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"tolerance {name} must be nonnegative")
    return name, v


def _suites(text: str) -> tuple:
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [s for s in names if s not in SUITES]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"unknown suite(s) {bad}; choose from {', '.join(SUITES)}")
    return names


def _default_seed() -> int:
    env = os.environ.get(SEED_ENV)
    if env is None:
        return DEFAULT_SEED
    try:
        return _seed(env)
    except argparse.ArgumentTypeError as exc:
        raise _InputError(f"{SEED_ENV}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="opmean", description="Operator means and complement inequalities on Hermitian matrices.")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("mean", help="evaluate A s B for a mean specification")
    m.add_argument("--mean", required=True, help="e.g. geometric:0.5, barbour2:(2t)^r:r=0.3, measure:FILE")
    m.add_argument("--a", required=True, type=Path, help="matrix JSON file")
    m.add_argument("--b", required=True, type=Path, help="matrix JSON file")
    m.add_argument("--out", type=Path)

    v = sub.add_parser("verify", help="run seeded randomized suites")
    v.add_argument("--suite", type=_suites, default=SUITES, help=f"comma list from: {', '.join(SUITES)}")
    v.add_argument("--mean", default=None, help="use this mean in every trial instead of the built-in pool")
    v.add_argument("--seed", type=_seed, default=None)
    v.add_argument("--trials", type=_positive, default=200)
    v.add_argument("--dims", type=_dims, default=(1, 8), metavar="LO..HI")
    v.add_argument("--tol", type=_tol, action="append", default=[], metavar="NAME=VAL")
    v.add_argument("--workers", type=_positive, default=1)
    v.add_argument("--out", type=Path)
    v.add_argument("--format", choices=("json", "csv"), default="json",
                   help="json: one report per line; csv: per-check summary")

    c = sub.add_parser("counterexample", help="the fixed 2x2 pair where operator versions fail")
    c.add_argument("--out", type=Path)
    return p


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _cmd_mean(args) -> int:
    f = parse_mean_spec(args.mean)
    try:
        a = load_matrix(args.a)
        b = load_matrix(args.b)
    except OSError as exc:
        raise _InputError(f"cannot read matrix file: {exc}") from None
    _emit(json.dumps(matrix_to_json(evaluate_mean(f, a, b))) + "\n", args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.mean is not None:
        parse_mean_spec(args.mean)  # fail fast on a bad specification
    cfg = RunConfig(
        seed=args.seed if args.seed is not None else _default_seed(),
        trials=args.trials,
        dims=args.dims,
        suites=args.suite,
        mean_spec=args.mean,
        tolerances=dict(args.tol),
        workers=args.workers,
    )
    result = run(cfg)
    _emit(result.jsonl() if args.format == "json" else result.csv(), args.out)
    for check_id, n, lo, bad in result.summary():
        print(f"{check_id:40s} trials={n:<5d} min_slack={lo:+.3e} failures={bad}", file=sys.stderr)
    return EXIT_FAILURE if result.failures else EXIT_OK


def _cmd_counterexample(args) -> int:
    rep = reproduce_counterexample()
    _emit(json.dumps(rep.to_dict(), indent=2, sort_keys=True) + "\n", args.out)
    ok = rep.matches_reference and rep.all_indefinite and rep.eigen_hold
    return EXIT_OK if ok else EXIT_FAILURE


_COMMANDS = {"mean": _cmd_mean, "verify": _cmd_verify, "counterexample": _cmd_counterexample}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (PreconditionViolated, NotPositiveDefinite, LinearMean) as exc:
        print(f"opmean: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (SpecParseError, NotHermitian, DimensionMismatch, DomainError, _InputError) as exc:
        print(f"opmean: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalFailure as exc:
        print(f"opmean: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
