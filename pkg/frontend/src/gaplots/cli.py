"""Command line entry point: render figures from graphalign CSVs.

Exit codes: 0 success, 2 schema mismatch or invalid arguments, 3 valid
input with no data rows, 4 I/O failure.
"""

import argparse
import sys

from .figures import BUILDERS, REQUIRED_COLUMNS, save_figure
from .io import EmptyData, SchemaMismatch, load_many

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_EMPTY = 3
EXIT_IO = 4


def build_parser():
    parser = argparse.ArgumentParser(
        prog="graphalign-plots",
        description="Render figures from graphalign sweep/threshold CSVs",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    render = sub.add_parser("render", help="render one figure")
    render.add_argument(
        "--kind", required=True, choices=sorted(BUILDERS),
        help="figure kind",
    )
    render.add_argument(
        "--in", dest="inputs", action="append", required=True,
        metavar="CSV", help="input CSV (repeatable)",
    )
    render.add_argument("--out", required=True, help="output image path")
    render.add_argument(
        "--format", choices=("png", "svg"), default=None,
        help="image format (default: from the output extension)",
    )
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_SCHEMA if exc.code not in (0, None) else EXIT_OK
    try:
        rows = load_many(args.inputs, REQUIRED_COLUMNS[args.kind])
        if not rows:
            raise EmptyData("no data rows")
        fig = BUILDERS[args.kind](rows)
        save_figure(fig, args.out, args.format)
    except SchemaMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except EmptyData as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
