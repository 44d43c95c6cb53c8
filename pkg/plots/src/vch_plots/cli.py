"""Command line: plots <kind> <input...> -o <file> [--linear-y] [--log-x]."""

from __future__ import annotations

import argparse
import sys

from .data import DataError
from .figures import KINDS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plots", description="Render figures from vch output files"
    )
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("inputs", nargs="+", help="CSV/JSON files emitted by vch")
    parser.add_argument("-o", "--output", required=True, help="output image (svg/pdf/png)")
    parser.add_argument("--linear-y", action="store_true", help="linear instead of log y-axis")
    parser.add_argument("--log-x", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        inputs=tuple(args.inputs),
        kind=args.kind,
        output=args.output,
        log_y=not args.linear_y,
        log_x=args.log_x,
    )
    try:
        path = render(spec)
    except DataError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
