"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 validation error, 3 solver error,
4 violation (only with ``--fail-on-violation`` / ``--check``).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Any, Sequence

from . import classical, quantum
from .errors import NumericalError, SolverError, ValidationError
from .lp import SHORT_NAMES, AssumptionSet, ace_bounds
from .report import falsify_pipeline, render_report

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_SOLVER, EXIT_VIOLATION = 0, 1, 2, 3, 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with status 2
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _read_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise _UsageError(f"cannot write {path}: {exc.strerror}") from exc


def _dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _colorize(text: str, falsified: bool) -> str:
    if os.environ.get("NO_COLOR") or not sys.stdout.isatty():
        return text
    code = "31" if falsified else "32"
    return text.replace("verdict             ", f"verdict             \x1b[{code}m", 1).rstrip("\n") + "\x1b[0m\n"


def cmd_preset(args: argparse.Namespace) -> int:
    if args.name != "bell":
        raise _UsageError(f"unknown preset {args.name!r}")
    _write(args.out, _dumps(quantum.bell_preset().to_json()))
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    scenario = quantum.QuantumInstrumentalScenario.from_json(_read_json(args.scenario))
    _write(args.out, _dumps(quantum.born_distribution(scenario).to_json()))
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> int:
    obs = quantum.ObservedDistribution.from_json(_read_json(args.dist))
    result = ace_bounds(obs, SHORT_NAMES[args.assumptions])
    _write(args.out, _dumps(result.to_json()))
    return EXIT_OK


def cmd_falsify(args: argparse.Namespace) -> int:
    scenario = quantum.QuantumInstrumentalScenario.from_json(_read_json(args.scenario))
    report = falsify_pipeline(scenario)
    text = render_report(report, args.format)
    if args.format == "text" and args.out == "-":
        text = _colorize(text, report.falsified)
    _write(args.out, text)
    if args.fail_on_violation and report.falsified:
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_classical(args: argparse.Namespace) -> int:
    model = classical.ResponseFunctionModel.from_json(_read_json(args.model))
    obs = classical.classical_observed(model)
    ace = classical.classical_true_ace(model)
    doc: dict[str, Any] = {"observed": obs.to_json(), "trueAce": ace}
    contained = True
    if args.check:
        checks = {}
        for a in AssumptionSet:
            b = ace_bounds(obs, a)
            inside = b.contains(ace, slack=1e-7)
            contained &= inside
            checks[a.value] = {"lower": b.lower, "upper": b.upper, "contains": inside}
        doc["bounds"] = checks
        doc["contained"] = contained
    _write(args.out, _dumps(doc))
    return EXIT_OK if contained else EXIT_VIOLATION


def _origin(exc: BaseException) -> str:
    """Module in which ``exc`` was raised."""
    tb = exc.__traceback__
    while tb is not None and tb.tb_next is not None:
        tb = tb.tb_next
    return tb.tb_frame.f_globals.get("__name__", "?") if tb is not None else "?"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jointexo", description="Quantum falsification of joint exogeneity via ACE bounds.")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="log progress (-vv also dumps simplex tableaux)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("preset", help="write a built-in scenario")
    p.add_argument("--name", required=True, choices=["bell"])
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("simulate", help="Born-rule observed distribution of a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bounds", help="ACE bounds for an observed distribution")
    p.add_argument("--dist", required=True)
    p.add_argument("--assumptions", choices=sorted(SHORT_NAMES), default="strat")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("falsify", help="full pipeline: simulate, bound, compare with the true ACE")
    p.add_argument("--scenario", required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--fail-on-violation", action="store_true", help="exit 4 when joint exogeneity is falsified")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_falsify)

    p = sub.add_parser("classical", help="observed distribution and ACE of a response-function model")
    p.add_argument("--model", required=True)
    p.add_argument("--check", action="store_true",
                   help="verify the true ACE lies inside every bound; exit 4 otherwise")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_classical)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
        logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except _UsageError as exc:
        print(f"jointexo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, NumericalError, SolverError) as exc:
        origin = _origin(exc)
        if isinstance(exc, SolverError) or origin.endswith(".simplex"):
            print(f"jointexo: solver error [{origin}]: {exc}", file=sys.stderr)
            return EXIT_SOLVER
        print(f"jointexo: validation error [{origin}]: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
