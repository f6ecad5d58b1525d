"""Command-line entry point: ``oddhodge {verify,solve,ratio,pairing,extremize}``.

Exit codes: 0 ok, 1 verification failed, 2 usage, 3 parse error,
4 incompatible data, 5 constant mode in the data (kernel).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import (
    DIVCURL_FIELDS,
    PAIRING_FIELDS,
    divcurl_ratio_experiment,
    hillclimb_extremizer,
    pairing_experiment,
    records_to_csv,
    records_to_json,
    summarize,
)
from .errors import DegreeMismatch, IncompatibleData, NonTrivialKernel
from .io import FormFileError, dumps_form, system_from_dict
from .solver import solve_odd
from .verify import run_suite

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_INCOMPATIBLE = 4
EXIT_KERNEL = 5


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oddhodge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the exact identity suites")
    v.add_argument("--n", type=int, default=3)
    v.add_argument("--max-q", type=int, default=None)
    v.add_argument("--max-m", type=int, default=2)
    v.add_argument("--trials", type=int, default=3)
    v.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("solve", help="solve a Hodge system from a JSON file")
    s.add_argument("input", type=Path)
    s.add_argument("output", type=Path)

    def experiment_args(sp, with_m=True):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--q", type=int, required=True)
        if with_m:
            sp.add_argument("--m", type=int, default=0)
        sp.add_argument("--bandwidth", type=int, default=4)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--density", type=float, default=0.25)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", type=Path, default=None, help="file to write (default: stdout)")

    r = sub.add_parser("ratio", help="div-curl ratio experiment")
    experiment_args(r)
    r.add_argument("--trials", type=int, default=10)

    pr = sub.add_parser("pairing", help="duality pairing experiment")
    experiment_args(pr, with_m=False)
    pr.add_argument("--trials", type=int, default=10)
    pr.add_argument("--variant", choices=("LL", "LS"), default="LL")
    pr.add_argument("--side", choices=("d", "dstar"), default="d")

    e = sub.add_parser("extremize", help="hill-climb for a large div-curl ratio")
    experiment_args(e)
    e.add_argument("--steps", type=int, default=20)
    return p


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def _summary_line(summary: dict, label: str) -> str:
    parts = [f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in summary.items()]
    return f"{label}: " + " ".join(parts)


def cmd_verify(args) -> int:
    if args.n < 1:
        print("error: n must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    report = run_suite(args.n, args.max_q, args.max_m, args.trials, args.seed)
    for line in report.lines():
        print(line)
    failing = next((c for c in report.checks if not c.passed), None)
    if failing is not None:
        print(f"first failing identity: {failing.name}", file=sys.stderr)
        print(json.dumps(failing.witness, indent=1, default=str), file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_solve(args) -> int:
    try:
        data = json.loads(args.input.read_text())
        system = system_from_dict(data)
    except (OSError, json.JSONDecodeError, FormFileError, DegreeMismatch) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except IncompatibleData as exc:
        print(f"incompatible data: {exc}", file=sys.stderr)
        return EXIT_INCOMPATIBLE
    try:
        v, report = solve_odd(system)
    except NonTrivialKernel as exc:
        print(f"kernel: {exc}", file=sys.stderr)
        return EXIT_KERNEL
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    args.output.write_text(dumps_form(v))
    report_path = args.output.with_name(args.output.name + ".report.json")
    report_path.write_text(json.dumps(report.to_dict(), indent=1) + "\n")
    return EXIT_FAILED if report.failed else EXIT_OK


def _write_records(records, fields, args, label) -> int:
    text = records_to_csv(records, fields) if args.format == "csv" else records_to_json(records, fields)
    _emit(text, args.output)
    print(_summary_line(summarize(records), label), file=sys.stderr)
    return EXIT_OK


def cmd_ratio(args) -> int:
    records = divcurl_ratio_experiment(args.n, args.q, args.m, args.bandwidth, args.trials, args.seed, args.density)
    return _write_records(records, DIVCURL_FIELDS, args, "ratio")


def cmd_pairing(args) -> int:
    records = pairing_experiment(
        args.n, args.q, args.trials, args.seed, args.variant, args.side, args.bandwidth, args.density
    )
    return _write_records(records, PAIRING_FIELDS, args, f"pairing {args.variant} empirical constant")


def cmd_extremize(args) -> int:
    records = hillclimb_extremizer(args.n, args.q, args.m, args.bandwidth, args.steps, args.seed, args.density)
    return _write_records(records, DIVCURL_FIELDS, args, "extremize")


COMMANDS = {
    "verify": cmd_verify,
    "solve": cmd_solve,
    "ratio": cmd_ratio,
    "pairing": cmd_pairing,
    "extremize": cmd_extremize,
}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (DegreeMismatch, ValueError) as exc:
        if args.command == "solve":
            raise
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
