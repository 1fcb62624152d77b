"""CLI wrapper: render --in sweep.csv --out fig.png [--logx] [--title ...]

Exit codes: 0 on success, 2 on schema or usage problems.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .render import PlotSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="render", description=__doc__)
    parser.add_argument("--in", dest="input_csv", required=True, help="sweep CSV path")
    parser.add_argument("--out", dest="output_path", required=True,
                        help="image path (.png or .svg)")
    parser.add_argument("--logx", action="store_true", help="logarithmic P_s axis")
    parser.add_argument("--title", default=None)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(
        input_csv=args.input_csv,
        output_path=args.output_path,
        logx=args.logx,
        title=args.title,
    )
    try:
        labels = render(spec)
    except SchemaError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    sys.stderr.write(f"wrote {spec.output_path} with {len(labels)} curve(s)\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
