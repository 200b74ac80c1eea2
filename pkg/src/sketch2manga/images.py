"""Image containers, PNG I/O, and the color conversions used by every stage.

Array conventions used throughout the package:

- ColorImage: ``uint8`` array of shape ``(h, w, 3)``, interleaved RGB.
- IntensityMap: ``float64`` array of shape ``(h, w)`` with values in [0, 1].
- HsvImage: ``float64`` array of shape ``(h, w, 3)`` holding hue in [0, 360),
  saturation in [0, 1], and value in [0, 1].

I/O is 8-bit PNG only; all computation happens in floating point.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
from PIL import Image

# BT.601 luma weights scaled to integers so gray pixels convert exactly:
# (299*v + 587*v + 114*v) / 255000 == v / 255 bit-for-bit, which the float
# coefficients (0.299 + 0.587 + 0.114 != 1.0) cannot guarantee.
LUMA_WEIGHTS = (299.0, 587.0, 114.0)
_LUMA_DENOM = 255000.0

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


def validate_color_image(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"color image must have shape (h, w, 3), got {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError("image must be at least 1x1")
    if img.dtype != np.uint8:
        raise ValueError(f"color image must be uint8, got {img.dtype}")
    return img


def validate_intensity_map(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"intensity map must have shape (h, w), got {m.shape}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError("intensity map must be at least 1x1")
    lo, hi = float(m.min()), float(m.max())
    if lo < 0.0 or hi > 1.0:
        raise ValueError(f"intensity values must lie in [0, 1], got [{lo}, {hi}]")
    return m


def quantize_unit(values: np.ndarray) -> np.ndarray:
    """Quantize [0, 1] floats to bytes by round-half-up: floor(v * 255 + 0.5)."""
    v = np.asarray(values, dtype=np.float64)
    return np.floor(v * 255.0 + 0.5).astype(np.uint8)


def _png_bit_depth(path: Path) -> int:
    with open(path, "rb") as f:
        header = f.read(25)
    if header[:8] != _PNG_SIGNATURE:
        raise ValueError(f"not a PNG file: {path}")
    if len(header) < 25:
        raise ValueError(f"corrupt PNG stream (truncated header): {path}")
    return header[24]


def load_image(path: str | Path) -> np.ndarray:
    """Decode an 8-bit PNG into a ColorImage.

    Grayscale files are replicated across channels; alpha, if present, is
    composited over white. PNGs with more than 8 bits per channel are
    rejected.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such image file: {path}")
    depth = _png_bit_depth(path)
    if depth > 8:
        raise ValueError(f"unsupported bit depth: {depth}-bit PNG rejected (8-bit only): {path}")
    try:
        with Image.open(path) as im:
            im.load()
            has_alpha = im.mode in ("RGBA", "LA", "PA") or (
                im.mode == "P" and "transparency" in im.info
            )
            if has_alpha:
                rgba = np.asarray(im.convert("RGBA"), dtype=np.float64)
                alpha = rgba[..., 3:] / 255.0
                rgb = rgba[..., :3] * alpha + 255.0 * (1.0 - alpha)
                return np.floor(rgb + 0.5).astype(np.uint8)
            return np.asarray(im.convert("RGB"), dtype=np.uint8).copy()
    except (OSError, SyntaxError) as e:
        raise ValueError(f"corrupt PNG stream: {path}: {e}") from e


def save_image(img: np.ndarray, path: str | Path) -> None:
    """Write a ColorImage or IntensityMap as a lossless 8-bit PNG.

    Intensity maps are quantized with round-half-up, so a subsequent load
    reproduces a ColorImage bit-exactly and an IntensityMap to within 1/255.
    """
    path = Path(path)
    img = np.asarray(img)
    if img.ndim == 3:
        Image.fromarray(validate_color_image(img), mode="RGB").save(path, format="PNG")
    elif img.ndim == 2:
        Image.fromarray(quantize_unit(validate_intensity_map(img)), mode="L").save(
            path, format="PNG"
        )
    else:
        raise ValueError(f"cannot save array of shape {img.shape}")


def load_intensity(path: str | Path) -> np.ndarray:
    """Load a PNG as an IntensityMap, converting color content via luma."""
    return to_intensity(load_image(path))


def to_intensity(img: np.ndarray) -> np.ndarray:
    """Per-pixel BT.601 luma normalized to [0, 1]."""
    img = validate_color_image(img)
    d = img.astype(np.float64)
    wr, wg, wb = LUMA_WEIGHTS
    y = (wr * d[..., 0] + wg * d[..., 1] + wb * d[..., 2]) / _LUMA_DENOM
    return np.clip(y, 0.0, 1.0)


def rgb_to_hsv(img: np.ndarray) -> np.ndarray:
    """Hexcone RGB -> HSV. Hue in degrees [0, 360); S and V in [0, 1]."""
    img = validate_color_image(img)
    r = img[..., 0] / 255.0
    g = img[..., 1] / 255.0
    b = img[..., 2] / 255.0
    maxc = np.maximum(np.maximum(r, g), b)
    minc = np.minimum(np.minimum(r, g), b)
    c = maxc - minc

    v = maxc
    s = np.where(maxc > 0.0, c / np.where(maxc > 0.0, maxc, 1.0), 0.0)

    chromatic = c > 0.0
    c_safe = np.where(chromatic, c, 1.0)
    h = np.where(
        chromatic & (maxc == r),
        (((g - b) / c_safe) % 6.0) * 60.0,
        np.where(
            chromatic & (maxc == g),
            (((b - r) / c_safe) + 2.0) * 60.0,
            np.where(chromatic, (((r - g) / c_safe) + 4.0) * 60.0, 0.0),
        ),
    )
    return np.stack([h, s, v], axis=-1)


def hsv_to_rgb(hsv: np.ndarray) -> np.ndarray:
    """Hexcone HSV -> 8-bit RGB, inverse of :func:`rgb_to_hsv` within 1/255."""
    hsv = np.asarray(hsv, dtype=np.float64)
    if hsv.ndim != 3 or hsv.shape[2] != 3:
        raise ValueError(f"HSV image must have shape (h, w, 3), got {hsv.shape}")
    h = hsv[..., 0]
    s = hsv[..., 1]
    v = hsv[..., 2]

    hp = (h % 360.0) / 60.0
    c = v * s
    x = c * (1.0 - np.abs(hp % 2.0 - 1.0))
    m = v - c

    sector = np.floor(hp).astype(np.int64) % 6
    zeros = np.zeros_like(c)
    # sector -> (r1, g1, b1) per the standard hexcone table
    r1 = np.choose(sector, [c, x, zeros, zeros, x, c])
    g1 = np.choose(sector, [x, c, c, x, zeros, zeros])
    b1 = np.choose(sector, [zeros, zeros, x, c, c, x])

    rgb = np.stack([r1 + m, g1 + m, b1 + m], axis=-1)
    return quantize_unit(np.clip(rgb, 0.0, 1.0))


def checksum_intensity(m: np.ndarray) -> str:
    """SHA-256 over dimensions plus the quantized bytes of an intensity map."""
    import hashlib

    m = validate_intensity_map(m)
    h, w = m.shape
    digest = hashlib.sha256()
    digest.update(f"{w}x{h}:".encode("ascii"))
    digest.update(quantize_unit(m).tobytes())
    return digest.hexdigest()


def ensure_parent_dir(path: str | Path) -> None:
    parent = Path(path).parent
    if str(parent) and not parent.is_dir():
        raise FileNotFoundError(f"output directory does not exist: {parent}{os.sep}")
