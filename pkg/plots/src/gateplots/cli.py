"""Command line: ``plot <figure-id> --in <csv> [--in <csv2>] --out <img>``.

Renders one figure from CSV tables written by the ``sim`` command.  Exit
status 0 on success, 2 for unusable inputs (missing columns, empty or
unreadable tables), 1 when the validated figure cannot be written.
"""

import argparse
import sys

from .figures import FIGURES, FigureError, FigureRecipe, render


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Render a figure from sim CSV output.",
    )
    parser.add_argument("figure", choices=FIGURES, help="figure to render")
    parser.add_argument(
        "--in",
        dest="inputs",
        action="append",
        required=True,
        metavar="CSV",
        help="input table; repeat once to overlay a comparison run",
    )
    parser.add_argument("--out", required=True, help="output image (png, pdf, svg)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        recipe = FigureRecipe(args.figure, tuple(args.inputs), args.out)
        render(recipe)
    except FigureError as exc:
        print("plot: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("plot: cannot write %s: %s" % (args.out, exc), file=sys.stderr)
        return 1
    print("%s -> %s" % (args.figure, args.out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
