"""Command-line front end.

    sqeval evaluate (-i FILE | --preset NAME) [--format text|latex] [--stats]
    sqeval check    (-i FILE | --preset NAME) [--nocc N] [--nvirt N] [--trials N] [--seed S] [--tol X]
    sqeval preset   NAME

Exit codes: 0 ok, 1 parse error, 2 internal invariant violation, 3 failed
check, 4 oracle budget exceeded, 64 usage error.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .dsl import ParseError, parse, render
from .engine import Stats
from .oracle import BasisError, OrbitalBasis, ScaleExceeded, check_equivalence
from .pipeline import InvariantViolation, evaluate
from .presets import PRESETS

EXIT_OK, EXIT_PARSE, EXIT_INTERNAL, EXIT_CHECK, EXIT_SCALE, EXIT_USAGE = 0, 1, 2, 3, 4, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("-i", "--input", help="expression file (.sq); '-' or omitted reads stdin")
    src.add_argument("--preset", help=f"one of: {', '.join(PRESETS)}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sqeval", description="Evaluate second-quantized expectation values.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("evaluate", help="reduce an expression to tensor contractions")
    _add_source(ev)
    ev.add_argument("--format", choices=("text", "latex"), default="text")
    ev.add_argument("--stats", action="store_true", help="report term and iteration counts")

    ck = sub.add_parser("check", help="verify the derivation against the Fock-space oracle")
    _add_source(ck)
    ck.add_argument("--nocc", type=int, default=2)
    ck.add_argument("--nvirt", type=int, default=2)
    ck.add_argument("--trials", type=int, default=5)
    ck.add_argument("--seed", type=int, default=0)
    ck.add_argument("--tol", type=float, default=1e-10)

    pr = sub.add_parser("preset", help="print the source of a built-in example")
    pr.add_argument("name")
    return parser


def _read_source(args) -> tuple[str, str]:
    if args.preset is not None:
        if args.preset not in PRESETS:
            raise UsageError(f"unknown preset {args.preset!r}")
        return f"<preset {args.preset}>", PRESETS[args.preset]
    if args.input in (None, "-"):
        return "<stdin>", sys.stdin.read()
    try:
        with open(args.input, encoding="utf-8") as fh:
            return args.input, fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from None


def _evaluate(args, out) -> int:
    origin, text = _read_source(args)
    try:
        expr = parse(text)
    except ParseError as exc:
        print(f"error: {origin}:{exc}", file=sys.stderr)
        return EXIT_PARSE
    stats = Stats()
    result = evaluate(expr, stats)
    print(render(result, args.format), file=out)
    if args.stats:
        print(f"# terms: {len(result)}", file=out)
        print(f"# iterations: {stats.iterations}", file=out)
    return EXIT_OK


def _check(args, out) -> int:
    try:
        basis = OrbitalBasis(args.nocc, args.nvirt)
    except BasisError as exc:
        raise UsageError(str(exc)) from None
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    origin, text = _read_source(args)
    try:
        expr = parse(text)
    except ParseError as exc:
        print(f"error: {origin}:{exc}", file=sys.stderr)
        return EXIT_PARSE
    derived = evaluate(expr)
    print(render(derived, "text"), file=out)
    try:
        report = check_equivalence(expr, derived, basis, args.trials, args.tol, args.seed)
    except ScaleExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCALE
    print(report.table(), file=out)
    return EXIT_OK if report.passed else EXIT_CHECK


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.command == "preset":
            if args.name not in PRESETS:
                raise UsageError(f"unknown preset {args.name!r}; choose from {', '.join(PRESETS)}")
            print(PRESETS[args.name], file=out)
            return EXIT_OK
        if args.command == "evaluate":
            return _evaluate(args, out)
        return _check(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvariantViolation, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def run() -> None:
    sys.exit(main())
