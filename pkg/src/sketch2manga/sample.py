"""Deterministic synthetic illustration used by the demo and tests."""

from __future__ import annotations

from importlib import resources

import numpy as np

SAMPLE_SIZE = 64


def sample_illustration() -> np.ndarray:
    """Build a 64x64 color illustration with several shaded color masses.

    Everything is computed from closed-form expressions so the image is
    identical across platforms: a vertical sky gradient, a ground band, two
    shaded blobs, and dark outline strokes.
    """
    h = w = SAMPLE_SIZE
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    ty = yy / (h - 1)
    tx = xx / (w - 1)

    img = np.stack(
        [168.0 + 42.0 * ty, 208.0 + 27.0 * ty, 255.0 - 10.0 * ty], axis=-1
    )

    ground = yy >= 44
    ground_color = np.stack(
        [80.0 + 20.0 * tx, 160.0 + 18.0 * tx, 70.0 + 12.0 * tx], axis=-1
    )
    img[ground] = ground_color[ground]

    # red blob, shaded toward its rim
    d1 = np.sqrt((xx - 20.0) ** 2 + (yy - 22.0) ** 2)
    blob1 = d1 <= 12.0
    shade1 = np.clip(1.0 - d1 / 24.0, 0.0, 1.0)
    color1 = np.stack(
        [150.0 + 90.0 * shade1, 40.0 + 30.0 * shade1, 35.0 + 25.0 * shade1],
        axis=-1,
    )
    img[blob1] = color1[blob1]

    # blue blob, lit from the upper left
    d2 = np.sqrt((xx - 46.0) ** 2 + (yy - 31.0) ** 2)
    blob2 = d2 <= 9.0
    lit = np.clip(1.0 - ((xx - 40.0) + (yy - 25.0)) / 30.0, 0.0, 1.0)
    color2 = np.stack(
        [30.0 + 40.0 * lit, 60.0 + 50.0 * lit, 150.0 + 80.0 * lit], axis=-1
    )
    img[blob2] = color2[blob2]

    outline = np.zeros((h, w), dtype=bool)
    outline |= (d1 >= 11.0) & (d1 <= 12.0)
    outline |= (d2 >= 8.0) & (d2 <= 9.0)
    outline |= yy == 44
    img[outline] = (25.0, 25.0, 30.0)

    return np.clip(np.floor(img + 0.5), 0.0, 255.0).astype(np.uint8)


def sample_illustration_path() -> str:
    """Path of the bundled PNG encoding of sample_illustration()."""
    ref = resources.files("sketch2manga").joinpath("data/sample_illustration.png")
    return str(ref)
