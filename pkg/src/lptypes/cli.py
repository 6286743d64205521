"""Command-line entry point.

Exit codes: 0 on success, 1 when the analysis rejects its input (for
example a function symbol without type rules), 2 on unreadable or
malformed input.
"""
from __future__ import annotations

import argparse
import sys

from .engine import AnalysisConfig, AnalysisError, analyze
from .parser import ParseError, parse_bindings, parse_rules
from .program import LoadError, load_program
from .report import to_json, to_text
from .terms import TermDomainError
from .types import TypeDomainError


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lptypes",
        description="Infer or/and types at every program point of a Prolog program.",
    )
    p.add_argument("program", help="program file with exactly one ':- Goal.' query")
    p.add_argument("--rules", required=True, help="type rule file")
    p.add_argument("--input", action="append", default=[], metavar="BINDINGS",
                   help='query variable types, e.g. "X:list(atom or float), Y:list(atom)"')
    p.add_argument("--k0", type=int, default=1, help="extra depth allowed by widening (default 1)")
    p.add_argument("--no-tabling", action="store_true", help="do not memoize emptiness checks")
    p.add_argument("--simplified", action="store_true",
                   help="single typing per point and no or/and in types")
    p.add_argument("--stats", action="store_true", help="print emptiness-check statistics")
    p.add_argument("--raw", action="store_true", help="print canonical types without tidying")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return p


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.k0 < 0:
        print("error: --k0 must be non-negative", file=sys.stderr)
        return 2
    try:
        rules = parse_rules(_read(args.rules))
        program = load_program(_read(args.program))
        bindings = {}
        for text in args.input:
            bindings.update(parse_bindings(text, rules))
        for name in bindings:
            program.query_var(name)
    except (ParseError, LoadError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    config = AnalysisConfig(k0=args.k0, tabling=not args.no_tabling, simplified=args.simplified)
    try:
        result = analyze(program, rules, bindings, config)
        if args.format == "json":
            out = to_json(result, raw=args.raw)
        else:
            out = to_text(result, stats=args.stats, raw=args.raw)
    except (TypeDomainError, TermDomainError, AnalysisError) as e:
        print(f"analysis error: {e}", file=sys.stderr)
        return 1
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
