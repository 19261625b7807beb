"""Command-line interface.

Subcommands
-----------
``identicheck check CORPUS_PATH``
    Parse a corpus file, evaluate every (identity, parameter) pair, and print
    a report (text table by default, ``--format json`` for the JSON document).

``identicheck eval "EXPR" [--param n=K]``
    Evaluate a single expression and print its certified enclosure.

``identicheck constants --euler N | --bernoulli M``
    Print exact integer Euler numbers (even indices up to N) or the
    historical Bernoulli sequence (B_1 .. B_M) as exact rationals.

Exit codes: 0 every expectation matched; 1 at least one mismatch; 2 some
verdicts inconclusive but none mismatched; 3 usage, parse, or I/O errors.
Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import exactseq
from .dsl import DslError, parse_corpus, parse_expr
from .engine import EvalBudget, evaluate, run
from .mpball import BallError

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage failures exit with code 3, not 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(3)


def _int_arg(text: str) -> int:
    """Integer option value, accepting 10000000, 10_000_000, and 1e7 forms."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value != int(value):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def _add_budget_options(parser: argparse.ArgumentParser):
    parser.add_argument("--digits", type=_int_arg, default=30,
                        help="decimal digits to certify (default 30)")
    parser.add_argument("--max-terms", type=_int_arg, default=10**7,
                        help="series/product truncation cap (default 1e7)")
    parser.add_argument("--prime-limit", type=_int_arg, default=10**6,
                        help="largest prime admitted to Euler products (default 1e6)")
    parser.add_argument("--mode", choices=("rigorous", "heuristic"), default="rigorous",
                        help="rigorous enclosures or fast non-certified estimates")


def _build_parser() -> _Parser:
    parser = _Parser(prog="identicheck",
                     description="Certified verification of series/product identities.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    check = sub.add_parser("check", help="verify every identity in a corpus file")
    check.add_argument("corpus", help="path to a corpus (.idn) file")
    _add_budget_options(check)
    check.add_argument("--format", choices=("text", "json"), default="text",
                       help="report format (default text)")
    check.add_argument("--only", metavar="ID", default=None,
                       help="restrict the run to one identity")
    check.add_argument("--timings", action="store_true",
                       help="include per-record wall-clock milliseconds")

    ev = sub.add_parser("eval", help="evaluate one expression to a certified enclosure")
    ev.add_argument("expr", help="expression in the corpus grammar")
    ev.add_argument("--param", action="append", default=[], metavar="NAME=VALUE",
                    help="bind a parameter (repeatable)")
    _add_budget_options(ev)

    consts = sub.add_parser("constants", help="print exact Euler/Bernoulli numbers")
    group = consts.add_mutually_exclusive_group(required=True)
    group.add_argument("--euler", type=_int_arg, metavar="N",
                       help="Euler numbers E_0, E_2, ..., E_N")
    group.add_argument("--bernoulli", type=_int_arg, metavar="M",
                       help="historical Bernoulli numbers B_1 .. B_M")
    return parser


def _budget_from(args) -> EvalBudget:
    return EvalBudget(digits=args.digits, max_terms=args.max_terms,
                      prime_limit=args.prime_limit, mode=args.mode)


def _cmd_check(args) -> int:
    try:
        with open(args.corpus, "r", encoding="utf-8") as handle:
            source = handle.read()
    except OSError as exc:
        print(f"error: cannot read {args.corpus}: {exc.strerror or exc}", file=sys.stderr)
        return 3
    try:
        corpus = parse_corpus(source)
    except DslError as exc:
        print(f"error: {args.corpus}: {exc}", file=sys.stderr)
        return 3
    try:
        budget = _budget_from(args)
        report = run(corpus, budget, corpus_path=args.corpus,
                     only=args.only, timings=args.timings)
    except (KeyError, ValueError) as exc:
        message = exc.args[0] if exc.args else str(exc)
        print(f"error: {message}", file=sys.stderr)
        return 3
    if args.format == "json":
        print(report.to_json())
    else:
        print(report.to_text())
    if report.mismatched:
        return 1
    if report.inconclusive:
        return 2
    return 0


def _parse_bindings(pairs) -> dict:
    env = {}
    for item in pairs:
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or not name.isidentifier():
            raise ValueError(f"expected NAME=VALUE, got {item!r}")
        try:
            env[name] = int(value)
        except ValueError:
            raise ValueError(f"parameter {name!r} needs an integer value, got {value!r}") from None
    return env


def _cmd_eval(args) -> int:
    try:
        env = _parse_bindings(args.param)
        expr = parse_expr(args.expr)
    except (DslError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    try:
        budget = _budget_from(args)
        ball = evaluate(expr, env, budget)
    except (ValueError, BallError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(f"{ball.mid_str(args.digits + 2)} ± {ball.rad_str()}")
    return 0


def _cmd_constants(args) -> int:
    if args.euler is not None:
        if args.euler < 0:
            print("error: --euler requires N >= 0", file=sys.stderr)
            return 3
        for n in range(0, args.euler + 1, 2):
            print(f"E_{n} = {exactseq.euler_number(n)}")
        return 0
    if args.bernoulli < 1:
        print("error: --bernoulli requires M >= 1", file=sys.stderr)
        return 3
    for m in range(1, args.bernoulli + 1):
        value = exactseq.bernoulli_hist(m)
        print(f"B_{m} = {value.numerator}/{value.denominator}")
    return 0


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse raises SystemExit for --help (code 0) and our usage errors (3)
        return exc.code if isinstance(exc.code, int) else 3
    if args.command == "check":
        return _cmd_check(args)
    if args.command == "eval":
        return _cmd_eval(args)
    return _cmd_constants(args)


if __name__ == "__main__":
    sys.exit(main())
