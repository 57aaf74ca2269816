"""render: turn a sweep CSV into an image.

Exit codes: 0 success, 2 bad arguments or schema mismatch (with a column
diagnostic on stderr), 1 other runtime failure.
"""

import argparse
import sys

from .render import FigureSpec, render
from .schema import KIND_COLUMNS, SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render a bsofdma experiment CSV into a figure image")
    parser.add_argument("--kind", required=True, choices=sorted(KIND_COLUMNS),
                        help="which sweep schema the CSV follows")
    parser.add_argument("--in", dest="csv_path", required=True,
                        metavar="CSV", help="input CSV path")
    parser.add_argument("--out", dest="out_path", required=True,
                        metavar="IMG", help="output image path")
    parser.add_argument("--title", help="optional figure title")
    return parser


def cli_main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    spec = FigureSpec(csv_path=args.csv_path, kind=args.kind,
                      out_path=args.out_path, title=args.title)
    try:
        out = render(spec)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
