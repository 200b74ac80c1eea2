"""Command line entry point.

The calling convention is the external-generator contract used by
sketch2manga: positional input and output PNG paths, flags after.

    manga-gen-adapter IN.png OUT.png [--backend ...] [--prompt ...]

Exit status 0 means the output PNG was written; 1 means generation
failed (backend unavailable, dimension mismatch, write error); 2 means
the invocation itself was bad (unknown flag, invalid setting, unreadable
input).
"""

from __future__ import annotations

import argparse
import sys

from . import config as cfg
from .backends import BackendUnavailable
from .core import DimensionMismatch, InputUnreadable, default_output_path, generate


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="manga-gen-adapter",
        description="Generate a rough manga page from an intensity map.",
    )
    parser.add_argument("input", help="conditioning intensity map (PNG)")
    parser.add_argument(
        "output",
        nargs="?",
        default=None,
        help="output PNG path; defaults to the --output-template expansion",
    )
    parser.add_argument(
        "--backend",
        default="diffusion",
        choices=list(cfg.BACKEND_NAMES),
        help="generation backend (default: diffusion; null copies the input through)",
    )
    parser.add_argument("--model", default=cfg.DEFAULT_MODEL, help="diffusion checkpoint id")
    parser.add_argument(
        "--controlnet", default=cfg.DEFAULT_CONTROLNET, help="conditioning network id"
    )
    parser.add_argument(
        "--strength",
        type=float,
        default=1.0,
        help="conditioning strength in [0, 2] (default: 1.0)",
    )
    parser.add_argument("--prompt", default=cfg.DEFAULT_PROMPT)
    parser.add_argument("--negative-prompt", default=cfg.DEFAULT_NEGATIVE_PROMPT)
    parser.add_argument("--device", default="auto", choices=list(cfg.DEVICE_NAMES))
    parser.add_argument("--steps", type=int, default=20, help="denoising steps (default: 20)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--output-template",
        default=cfg.DEFAULT_OUTPUT_TEMPLATE,
        help="pattern for the output path when none is given; "
        "{stem} and {dir} expand from the input path",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = cfg.AdapterConfig(
        backend=args.backend,
        model=args.model,
        controlnet=args.controlnet,
        strength=args.strength,
        prompt=args.prompt,
        negative_prompt=args.negative_prompt,
        device=args.device,
        steps=args.steps,
        seed=args.seed,
        output_template=args.output_template,
    )
    try:
        config.validate()
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    from pathlib import Path

    input_path = Path(args.input)
    if args.output is not None:
        output_path = Path(args.output)
    else:
        try:
            output_path = default_output_path(input_path, config.output_template)
        except (KeyError, IndexError) as exc:
            print(f"config error: bad output template: {exc}", file=sys.stderr)
            return 2

    try:
        generate(input_path, output_path, config)
    except InputUnreadable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BackendUnavailable, DimensionMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 1

    print(output_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
