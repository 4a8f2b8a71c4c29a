"""Figure rendering CLI.

    dimersync-figures heatmap --in map.csv --out fig.png
    dimersync-figures spectrum --in a.csv b.csv --out fig.png
    dimersync-figures trajectory --in traj.csv --rolling rolling.csv --out fig.png

Exit codes: 0 success, 1 bad specification, 2 malformed artifact.
"""

from __future__ import annotations

import argparse
import sys

from .io import SchemaError
from .render import FigureConfigError, FigureSpec, RATIO_21_LEVELS, \
    RATIO_23_LEVELS, render

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SCHEMA = 2


def _levels(text, default):
    if text is None:
        return default
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise FigureConfigError(f"bad contour levels {text!r}") from exc


def build_parser():
    parser = argparse.ArgumentParser(prog="dimersync-figures",
                                     description="Render simulator artifacts.")
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in ("heatmap", "spectrum", "trajectory"):
        p = sub.add_parser(kind)
        p.add_argument("--in", dest="inputs", nargs="+", required=True)
        p.add_argument("--out", required=True)
        p.add_argument("--cmap", default="viridis")
        if kind == "heatmap":
            p.add_argument("--contours-21", default=None,
                           help="comma-separated levels for the slowest-rate ratio")
            p.add_argument("--contours-23", default=None,
                           help="comma-separated levels for the band-minimum ratio")
        if kind == "trajectory":
            p.add_argument("--observables", default=None,
                           help="comma-separated series names (default: all)")
            p.add_argument("--rolling", default=None,
                           help="rolling synchronization CSV for the inset")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(
            kind=args.kind,
            inputs=tuple(args.inputs),
            cmap=args.cmap,
            contours_21=_levels(getattr(args, "contours_21", None), RATIO_21_LEVELS),
            contours_23=_levels(getattr(args, "contours_23", None), RATIO_23_LEVELS),
            observables=tuple(args.observables.split(","))
            if getattr(args, "observables", None) else (),
            rolling_input=getattr(args, "rolling", None),
        )
        render(spec, args.out)
    except FigureConfigError as exc:
        print(f"figure spec error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SchemaError as exc:
        print(f"artifact schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
