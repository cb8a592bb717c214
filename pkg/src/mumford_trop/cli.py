"""Command-line entry point: ``mumford-trop classify|tropicalize|verify``.

Exit status is 0 on success, 1 when verification or the standing
assumption fails, 2 when the instance file cannot be parsed.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .faithful import UnsupportedError
from .instance import InstanceError, load_instance
from .moebius import DomainError
from .report import (
    VerificationFailure,
    classify_report,
    dumps_report,
    tropicalize_report,
    verify_report,
)
from .skeleton import InconsistencyError
from .svg import render_svg


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mumford-trop",
        description="Skeletons and faithful tropicalizations of genus-2 Mumford curves.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="skeleton type, cycle lengths and period matrix")
    c.add_argument("file")
    c.add_argument("--out", help="write the report here instead of stdout")

    t = sub.add_parser("tropicalize", help="build and check the tropical curve")
    t.add_argument("file")
    t.add_argument("--dim", type=int, choices=(2, 3), default=2)
    t.add_argument("--out", help="write the report here instead of stdout")
    t.add_argument("--svg", help="also draw the curve to this SVG file")

    v = sub.add_parser("verify", help="run the oracle checks")
    v.add_argument("file")
    v.add_argument("--words", type=int, help="word length for the u-function products")
    v.add_argument("--grid", type=_rational, help="grid step, e.g. 1/16")
    v.add_argument("--out", help="write the report here instead of stdout")
    return p


def _emit(report: dict, out: str | None) -> None:
    text = dumps_report(report)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        inst = load_instance(args.file)
    except InstanceError as exc:
        print(f"{args.file}: parse error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"{args.file}: {exc.strerror}", file=sys.stderr)
        return 2

    try:
        if args.command == "classify":
            _emit(classify_report(inst), args.out)
            return 0
        if args.command == "tropicalize":
            report, res = tropicalize_report(inst, args.dim)
            _emit(report, args.out)
            if args.svg:
                curve = res.curve2 if args.dim == 2 else res.curve3
                faith = res.report2 if args.dim == 2 else res.report3
                title = f"{inst.name or Path(args.file).stem}: dim {args.dim}, {faith.verdict}"
                Path(args.svg).write_text(render_svg(curve, faith.crossings, title),
                                          encoding="utf-8")
            return 0
        report = verify_report(inst, args.words, args.grid)
        _emit(report, args.out)
        return 0 if report["passed"] else 1
    except (VerificationFailure, UnsupportedError, DomainError, InconsistencyError) as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
