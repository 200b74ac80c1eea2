"""Shared fixtures: deterministic synthetic images for the test corpus."""

from __future__ import annotations

import numpy as np
import pytest


def make_noise_image(seed: int, height: int, width: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8)


def make_patch_image(seed: int, height: int, width: int, n_sites: int = 5) -> np.ndarray:
    """Nearest-site coloring: a handful of solid color patches."""
    rng = np.random.default_rng(seed)
    sites = np.stack(
        [rng.integers(0, height, n_sites), rng.integers(0, width, n_sites)], axis=1
    )
    colors = rng.integers(0, 256, size=(n_sites, 3), dtype=np.uint8)
    yy, xx = np.mgrid[0:height, 0:width]
    d = (yy[..., None] - sites[:, 0]) ** 2 + (xx[..., None] - sites[:, 1]) ** 2
    return colors[np.argmin(d, axis=-1)]


def build_corpus() -> list[tuple[str, np.ndarray]]:
    """Ten deterministic images spanning flat, gradient, noisy, and
    achromatic content."""
    images = []

    quad = np.zeros((32, 32, 3), dtype=np.uint8)
    quad[:16, :16] = (200, 40, 40)
    quad[:16, 16:] = (40, 200, 40)
    quad[16:, :16] = (40, 40, 200)
    quad[16:, 16:] = (200, 200, 40)
    images.append(("quadrants", quad))

    xx = np.tile(np.arange(40, dtype=np.uint8) * 6, (28, 1))
    hgrad = np.stack([xx, np.full_like(xx, 120), 255 - xx], axis=-1)
    images.append(("h_gradient", hgrad))

    yy = np.repeat(np.arange(36, dtype=np.uint8)[:, None] * 7, 24, axis=1)
    vgrad = np.stack([np.full_like(yy, 90), yy, yy // 2], axis=-1)
    images.append(("v_gradient", vgrad))

    ramp = np.tile(np.linspace(0, 255, 48).astype(np.uint8), (24, 1))
    gray = np.stack([ramp, ramp, ramp], axis=-1)
    images.append(("gray_ramp", gray))

    images.append(("noise_small", make_noise_image(11, 24, 24)))
    images.append(("noise_wide", make_noise_image(12, 20, 44)))
    images.append(("patches_a", make_patch_image(13, 32, 32)))
    images.append(("patches_b", make_patch_image(14, 40, 28, n_sites=7)))

    stripes = np.zeros((30, 30, 3), dtype=np.uint8)
    for i in range(30):
        stripes[i] = [(230, 120, 60), (60, 120, 230), (120, 230, 60)][i % 3]
    images.append(("stripes", stripes))

    lowsat = np.full((28, 28, 3), 128, dtype=np.uint8)
    lowsat[:, :14, 0] = 140
    lowsat[14:, :, 2] = 118
    images.append(("low_saturation", lowsat))

    return images


@pytest.fixture(scope="session")
def corpus() -> list[tuple[str, np.ndarray]]:
    return build_corpus()
