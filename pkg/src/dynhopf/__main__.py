"""Command line: ``python -m dynhopf check|explain``."""
from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

from .cli_io import CHECK_INDEX, SUITES, MissingSection, ValidationError, emit, explain, load_model, run_suite
from .expr import ParseError

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="python -m dynhopf", description="Residual checks for dynamical twists and r-matrices.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    c = sub.add_parser("check", help="run a check suite on a model file")
    c.add_argument("--model", required=True)
    c.add_argument("--suite", required=True, choices=SUITES + ("all",))
    c.add_argument("--hbar-order", type=int)
    c.add_argument("--diff-cap", type=int)
    c.add_argument("--pbw-cap", type=int)
    c.add_argument("--samples", type=int)
    c.add_argument("--seed", type=int)
    c.add_argument("--tol", type=float)
    c.add_argument("--report", metavar="OUT.json")
    c.add_argument("--csv", metavar="OUT.csv")
    e = sub.add_parser("explain", help="describe a check")
    e.add_argument("check")
    sub.add_parser("list", help="list check names")
    return p


def _seed(cli_seed: Optional[int]) -> Optional[int]:
    env = os.environ.get("WORKBENCH_SEED")
    if env is None or env == "":
        return cli_seed
    try:
        return int(env)
    except ValueError:
        raise SystemExit(f"WORKBENCH_SEED must be an integer, got {env!r}") from None


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for name in sorted(CHECK_INDEX):
            print(name)
        return EXIT_PASS
    if args.command == "explain":
        if args.check not in CHECK_INDEX:
            print(f"unknown check {args.check!r}; try 'list'", file=sys.stderr)
            return EXIT_USAGE
        print(explain(args.check))
        return EXIT_PASS
    try:
        seed = _seed(args.seed)
    except SystemExit as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    for flag in ("hbar_order", "diff_cap", "pbw_cap", "samples"):
        v = getattr(args, flag)
        if v is not None and v < (1 if flag == "samples" else 0):
            print(f"--{flag.replace('_', '-')} out of range: {v}", file=sys.stderr)
            return EXIT_USAGE
    try:
        model = load_model(args.model)
        model = model.with_overrides(args.hbar_order, args.diff_cap, args.pbw_cap, args.samples, seed, args.tol)
        report = run_suite(model, args.suite)
    except (ParseError, ValidationError, MissingSection) as err:
        print(f"{args.model}: {err}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as err:
        print(err, file=sys.stderr)
        return EXIT_USAGE
    for r in report.records:
        order = "" if r.hbar_order_of_first_failure is None else f" first failure at ℏ^{r.hbar_order_of_first_failure}"
        norm = "n/a" if r.residual_norm is None else f"{r.residual_norm:.3g}"
        print(f"{r.status:9s} {r.name:28s} residual {norm}{order}  {r.detail}".rstrip())
    emit(report, args.report, args.csv)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
