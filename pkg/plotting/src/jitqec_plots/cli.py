"""Command line for threshold plots: jitqec-plot --csv ... --code A --out f.png"""

from __future__ import annotations

import argparse
import sys

from .core import SchemaError, plot_threshold


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="jitqec-plot",
        description="Threshold curves and crossing estimate from a sweep CSV")
    parser.add_argument("--csv", required=True)
    parser.add_argument("--code", choices=["A", "B", "C"], required=True)
    parser.add_argument("--out", required=True,
                        help="image path ending in .png or .svg")
    args = parser.parse_args(argv)
    try:
        plot_threshold(args.csv, args.code, args.out)
    except (OSError, SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
