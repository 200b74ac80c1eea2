"""Run the pipeline over the bundled sample with a few pattern variants.

Writes one output per variant plus intermediates, so the whole stage chain
can be inspected visually in one directory.
"""

import argparse
from pathlib import Path

from sketch2manga import pipeline, scaling, toner
from sketch2manga.sample import sample_illustration_path

VARIANTS = {
    "bayer": toner.PatternSpec(),
    "dot": toner.PatternSpec(family="dot", frequency=0.125, angle=45.0),
    "line": toner.PatternSpec(family="line", frequency=0.125, angle=45.0),
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="demo_out", help="output directory")
    parser.add_argument("--input", default=None,
                        help="input PNG (default: the bundled sample)")
    parser.add_argument("--match-hist", action="store_true",
                        help="histogram-match the final manga to the rough")
    args = parser.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    input_path = args.input or sample_illustration_path()

    for name, spec in VARIANTS.items():
        subdir = outdir / name
        subdir.mkdir(exist_ok=True)
        config = pipeline.PipelineConfig(
            input_path=input_path,
            output_path=str(subdir / "final.png"),
            pattern=spec,
            scaling=scaling.ScalingParams(histogram_match=args.match_hist),
            dump_intermediates=True,
        )
        report = pipeline.run_pipeline(config)
        print(f"[{name}]")
        for line in report.lines():
            print(f"  {line}")


if __name__ == "__main__":
    main()
