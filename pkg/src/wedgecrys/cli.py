"""Command-line surface: compound, rank, slopes, wedge, check.

stdout carries exactly one canonical JSON document (sorted keys, no
floats, rationals as "s/t" strings); diagnostics go to stderr.  Exit
codes: 0 success, 2 malformed payload, 3 dimension error, 4 precision
exhausted, 5 campaign failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .campaigns import CAMPAIGNS, run_campaign
from .dieudonne import GroupDescriptor, isocrystal_from_json, polygon_to_json, slopes
from .errors import (
    BadDescriptor,
    DimensionMismatch,
    PrecisionExhausted,
    SchemaError,
    WedgecrysError,
)
from .matrices import compound, matrix_from_json, matrix_to_json, rank
from .wedge import slope_precision, wedge_report

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_DIMENSION = 3
EXIT_PRECISION = 4
EXIT_CHECK_FAILED = 5


def _read_payload(source: str):
    """--in accepts a file path, '-' for stdin, or inline JSON."""
    if source.lstrip().startswith("{"):
        text = source
    elif source == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(source, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise SchemaError(f"cannot read {source}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _default_p() -> int:
    return int(os.environ.get("WEDGECRYS_DEFAULT_P", "3"))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wedgecrys",
        description="exact compound-matrix, rank, slope and wedge computations",
    )
    sub = ap.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("compound", help="compound matrix of d-minors")
    c.add_argument("--in", dest="src", required=True, help="matrix JSON (path, '-', or inline)")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--out")

    r = sub.add_parser("rank", help="determinantal-ideal rank with witness")
    r.add_argument("--in", dest="src", required=True)
    r.add_argument("--out")

    s = sub.add_parser("slopes", help="Newton slopes of an isocrystal")
    s.add_argument("--in", dest="src", required=True)
    s.add_argument("--out")

    w = sub.add_parser("wedge", help="wedge power report for a standard module")
    w.add_argument("--h", dest="h", type=int, required=True)
    w.add_argument("--dim", type=int, required=True)
    w.add_argument("--r", dest="r", type=int, required=True)
    w.add_argument("--p", type=int, default=None)
    w.add_argument("--a", type=int, default=1)
    w.add_argument("--m", type=int, default=None, help="working precision (default: sufficient)")
    w.add_argument("--out")

    k = sub.add_parser("check", help="run a property campaign")
    k.add_argument("campaign", choices=CAMPAIGNS)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--trials", type=int, default=None)
    k.add_argument("--exhaustive-f2", action="store_true")
    k.add_argument("--wrong-shift", action="store_true", help=argparse.SUPPRESS)
    k.add_argument("--out")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "compound":
            A = matrix_from_json(_read_payload(args.src))
            _emit(matrix_to_json(compound(A, args.d)), args.out)
            return EXIT_OK

        if args.verb == "rank":
            A = matrix_from_json(_read_payload(args.src))
            res = rank(A)
            _emit(
                {
                    "schema": "v1",
                    "rank": res.rank,
                    "witness": [s.value for s in res.witness],
                },
                args.out,
            )
            return EXIT_OK

        if args.verb == "slopes":
            C = isocrystal_from_json(_read_payload(args.src))
            _emit(polygon_to_json(slopes(C)), args.out)
            return EXIT_OK

        if args.verb == "wedge":
            p = args.p if args.p is not None else _default_p()
            try:
                desc = GroupDescriptor(args.h, args.dim)
                if desc.dim > 1:
                    raise BadDescriptor("wedge reports require dim <= 1")
            except BadDescriptor as exc:
                sys.stderr.write(f"bad descriptor: {exc}\n")
                return EXIT_SCHEMA
            try:
                report = wedge_report(desc, args.r, p, args.a, m=args.m)
            except PrecisionExhausted:
                need = slope_precision(args.h, args.dim, args.r, args.a)
                sys.stderr.write(f"precision exhausted; required minimum m: {need}\n")
                return EXIT_PRECISION
            _emit(report, args.out)
            return EXIT_OK

        if args.verb == "check":
            report = run_campaign(
                args.campaign,
                seed=args.seed,
                trials=args.trials,
                exhaustive_f2=args.exhaustive_f2,
                wrong_shift=args.wrong_shift,
            )
            _emit(report, args.out)
            if report["failures"]:
                sys.stderr.write(
                    f"{report['failures']} failure(s); first counterexample: "
                    f"{json.dumps(report['counterexamples'][:1], sort_keys=True)}\n"
                )
                return EXIT_CHECK_FAILED
            return EXIT_OK

        raise AssertionError("unreachable verb")
    except SchemaError as exc:
        sys.stderr.write(f"schema error: {exc}\n")
        return EXIT_SCHEMA
    except DimensionMismatch as exc:
        sys.stderr.write(f"dimension error: {exc}\n")
        return EXIT_DIMENSION
    except PrecisionExhausted as exc:
        need = exc.required_m if exc.required_m is not None else "unknown"
        sys.stderr.write(f"precision exhausted ({exc}); required minimum m: {need}\n")
        return EXIT_PRECISION
    except WedgecrysError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
