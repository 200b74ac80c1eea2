"""Command line entry point.

Exit codes: 0 on success, 1 when a pipeline stage fails, 2 for bad
configuration or unusable inputs (argparse errors also exit 2).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import pipeline
from .errors import ConfigError, StageError
from .scaling import CHANNELS
from .toner import PATTERN_FAMILIES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sketch2manga",
        description="Turn color illustrations into screentoned manga pages.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="process one image or a directory of PNGs")
    run.add_argument("--input", help="input PNG file or directory")
    run.add_argument("--output", help="output PNG file or directory")
    run.add_argument("--config", help="flat key=value config file")
    run.add_argument(
        "--generator",
        help="'builtin' or an external command template with {in} and {out}",
    )
    run.add_argument("--pattern", choices=PATTERN_FAMILIES,
                     help="builtin screen pattern family")
    run.add_argument("--frequency", type=float,
                     help="pattern frequency in cycles per pixel")
    run.add_argument("--angle", type=float, help="screen angle in degrees")
    run.add_argument("--bayer-order", type=int, dest="bayer_order",
                     help="Bayer matrix order (power of two)")
    run.add_argument("--black-point", type=float, dest="black_point",
                     help="intensities at or below this render solid black")
    run.add_argument("--white-point", type=float, dest="white_point",
                     help="intensities at or above this render solid white")
    run.add_argument("--kmeans-k", type=int, dest="kmeans_k",
                     help="number of color clusters")
    run.add_argument("--kmeans-max-iters", type=int, dest="kmeans_max_iters",
                     help="k-means iteration cap")
    run.add_argument("--seed", type=int, help="clustering RNG seed")
    run.add_argument("--w-low", type=float, dest="w_low",
                     help="darkening weight for the scaling range")
    run.add_argument("--w-high", type=float, dest="w_high",
                     help="brightening weight for the scaling range")
    run.add_argument("--channel", choices=CHANNELS,
                     help="HSV channel the scaling acts on")
    run.add_argument("--match-hist", action="store_const", const=True,
                     dest="match_hist", default=None,
                     help="match the final histogram to the rough manga")
    run.add_argument("--low-sat-fallback", type=float, dest="low_sat_fallback",
                     help="mean saturation below which lightness is scaled instead")
    run.add_argument("--input-kind", choices=pipeline.INPUT_KINDS,
                     dest="input_kind", help="treat the input as this kind")
    run.add_argument("--colorizer", help="external colorization command "
                     "template with {in} and {out} (required for sketches)")
    run.add_argument("--dump-intermediates", action="store_const", const=True,
                     dest="dump_intermediates", default=None,
                     help="write intensity/rough/labels/scaled PNGs next to the output")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    cli_values = {
        key: getattr(args, key)
        for key in pipeline.CONFIG_KEYS
        if hasattr(args, key)
    }

    try:
        config = pipeline.build_config(cli_values, config_file=args.config)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2

    batch = Path(config.input_path).is_dir()
    try:
        if batch:
            reports = pipeline.run_batch(config)
        else:
            reports = [pipeline.run_pipeline(config)]
    except StageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

    for report in reports:
        for line in report.lines():
            print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
