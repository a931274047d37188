"""Command line entry point.

Exit codes: 0 when every verdict passes, 1 on a geometric verdict failure,
2 when the scenario cannot be parsed or does not describe a valid geometry.
"""

from __future__ import annotations

import argparse
import sys

from .poly import ParseError
from .report import Report, emit_report, run_scenario
from .scenario import BUILTINS, ScenarioError

__all__ = ["main", "build_parser", "run_scenario", "emit_report", "Report"]

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("exact", "float"), default=None,
                        help="arithmetic mode (default: the scenario's own)")
    common.add_argument("--tolerance", type=float, default=None,
                        help="absolute zero tolerance in float mode (default 1e-9)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--checks", default=None,
                        help="comma separated check ids, 'all', or '' for decomposition only")

    parser = argparse.ArgumentParser(
        prog="goldlight",
        description="Verify lightlike submanifolds of golden semi-Riemannian product spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run a scenario file")
    v.add_argument("--scenario", required=True, help="path to a JSON scenario")
    e = sub.add_parser("example", parents=[common], help="run a built-in scenario")
    e.add_argument("--id", required=True, choices=sorted(BUILTINS), dest="ident")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.tolerance is not None and args.mode != "float":
        print("warning: --tolerance only applies in float mode", file=sys.stderr)
    source = args.scenario if args.command == "verify" else args.ident
    try:
        report = run_scenario(source, mode=args.mode, tolerance=args.tolerance, checks=args.checks)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(emit_report(report, args.format))
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
