"""Regenerate the bundled sample illustration PNG from its builder."""

import argparse
from pathlib import Path

from sketch2manga import images
from sketch2manga.sample import sample_illustration


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out",
        default=str(
            Path(__file__).resolve().parent.parent
            / "src" / "sketch2manga" / "data" / "sample_illustration.png"
        ),
        help="where to write the PNG (default: the bundled data path)",
    )
    args = parser.parse_args()
    img = sample_illustration()
    images.save_image(img, args.out)
    print(f"wrote {img.shape[1]}x{img.shape[0]} sample to {args.out}")


if __name__ == "__main__":
    main()
