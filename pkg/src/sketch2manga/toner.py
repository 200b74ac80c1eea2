"""Deterministic screentone synthesis and the external-generator contract.

The built-in synthesizer binarizes an intensity map against a spatial
threshold field, producing a bilevel rough manga whose local black coverage
tracks the input tone. It stands in for heavyweight learned generators; any
such generator can be plugged in through :func:`run_external_generator`,
which speaks a simple PNG-in / PNG-out command-line contract.
"""

from __future__ import annotations

import math
import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import GeneratorFailed, GeneratorOutputMismatch, GeneratorOutputMissing
from .images import save_image, to_intensity, validate_intensity_map

PATTERN_FAMILIES = ("dot", "line", "bayer", "threshold")


@dataclass(frozen=True)
class PatternSpec:
    """Screentone pattern parameters for the built-in synthesizer.

    frequency is in cycles per pixel and must respect Nyquist (<= 0.5).
    Pixels at or beyond the protection points bypass the pattern: intensities
    <= black_point stay solid black, >= white_point stay paper white.
    """

    family: str = "bayer"
    frequency: float = 0.125
    angle: float = 45.0
    bayer_order: int = 8
    black_point: float = 0.02
    white_point: float = 0.98

    def __post_init__(self):
        if self.family not in PATTERN_FAMILIES:
            raise ValueError(
                f"unknown pattern family {self.family!r}; choose from {PATTERN_FAMILIES}"
            )
        if not (0.0 < self.frequency <= 0.5):
            raise ValueError(
                f"frequency must lie in (0, 0.5] cycles/pixel, got {self.frequency}"
            )
        if not (0.0 <= self.angle < 180.0):
            raise ValueError(f"angle must lie in [0, 180) degrees, got {self.angle}")
        if self.bayer_order < 1 or (self.bayer_order & (self.bayer_order - 1)) != 0:
            raise ValueError(
                f"bayer_order must be a power of two, got {self.bayer_order}"
            )
        if not (0.0 <= self.black_point < self.white_point <= 1.0):
            raise ValueError(
                "black_point must be < white_point, both in [0, 1]; "
                f"got {self.black_point} / {self.white_point}"
            )


def bayer_matrix(order: int) -> np.ndarray:
    """Ordered-dither index matrix of the given power-of-two size."""
    if order < 1 or (order & (order - 1)) != 0:
        raise ValueError(f"bayer order must be a power of two, got {order}")
    m = np.zeros((1, 1), dtype=np.int64)
    while m.shape[0] < order:
        m = np.block([[4 * m, 4 * m + 2], [4 * m + 3, 4 * m + 1]])
    return m


def _threshold_field(height: int, width: int, spec: PatternSpec) -> np.ndarray:
    if spec.family == "threshold":
        return np.full((height, width), 0.5)
    if spec.family == "bayer":
        m = bayer_matrix(spec.bayer_order)
        tiled = m[
            np.arange(height)[:, None] % spec.bayer_order,
            np.arange(width)[None, :] % spec.bayer_order,
        ]
        return (tiled + 0.5) / float(spec.bayer_order**2)

    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    theta = math.radians(spec.angle)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    xr = xs * cos_t + ys * sin_t
    # Phase is reduced mod 1 before the sine so integer-period frequencies
    # tile exactly instead of accumulating float drift across the image.
    px = (spec.frequency * xr) % 1.0
    if spec.family == "line":
        return 0.5 + 0.5 * np.sin(2.0 * math.pi * px)
    yr = -xs * sin_t + ys * cos_t
    py = (spec.frequency * yr) % 1.0
    return 0.5 + 0.5 * np.sin(2.0 * math.pi * px) * np.sin(2.0 * math.pi * py)


def synthesize(intensity: np.ndarray, spec: PatternSpec) -> np.ndarray:
    """Binarize an intensity map against the pattern's threshold field.

    Output pixels are 0.0 or 1.0: black where intensity < threshold, white
    otherwise, except that the protection points override the pattern.
    """
    intensity = validate_intensity_map(intensity)
    field = _threshold_field(intensity.shape[0], intensity.shape[1], spec)
    patterned = np.where(intensity < field, 0.0, 1.0)
    return np.where(
        intensity >= spec.white_point,
        1.0,
        np.where(intensity <= spec.black_point, 0.0, patterned),
    )


def black_coverage(rough: np.ndarray) -> float:
    """Fraction of black pixels in a bilevel map."""
    rough = np.asarray(rough)
    return float((rough < 0.5).mean())


def validate_command_template(command: str) -> list[str]:
    """Split a generator command template, requiring {in} and {out} tokens."""
    tokens = shlex.split(command)
    joined = " ".join(tokens)
    if "{in}" not in joined or "{out}" not in joined:
        raise ValueError(
            "generator command template must contain both {in} and {out} placeholders"
        )
    return tokens


def _invoke_wire_command(
    command: str, in_path: Path, out_path: Path
) -> None:
    tokens = [
        tok.replace("{in}", str(in_path)).replace("{out}", str(out_path))
        for tok in validate_command_template(command)
    ]
    proc = subprocess.run(tokens, capture_output=True, text=True)
    if proc.returncode != 0:
        tail = (proc.stderr or proc.stdout or "").strip()[-2000:]
        raise GeneratorFailed(
            f"generator failed with exit status {proc.returncode}: {tail or '<no diagnostics>'}"
        )
    if not out_path.is_file():
        raise GeneratorOutputMissing(
            f"generator exited 0 but produced no output file at {out_path}"
        )


def run_external_generator(
    intensity: np.ndarray | str | Path, command: str
) -> np.ndarray:
    """Produce a rough manga by invoking an external generator command.

    The intensity map (an array, or a path to an existing grayscale PNG) is
    materialized as an 8-bit PNG, {in}/{out} placeholders in the command
    template are substituted, and the command's 8-bit PNG output is read
    back, checked for matching dimensions, and normalized to [0, 1].
    """
    with tempfile.TemporaryDirectory(prefix="sketch2manga-gen-") as tmp:
        tmp_path = Path(tmp)
        out_path = tmp_path / "out.png"
        if isinstance(intensity, (str, Path)):
            in_path = Path(intensity)
            with Image.open(in_path) as im:
                expected = (im.height, im.width)
        else:
            expected = validate_intensity_map(intensity).shape
            in_path = tmp_path / "in.png"
            save_image(intensity, in_path)

        _invoke_wire_command(command, in_path, out_path)

        with Image.open(out_path) as im:
            im.load()
            if (im.height, im.width) != expected:
                raise GeneratorOutputMismatch(
                    f"generator output is {im.width}x{im.height}, expected "
                    f"{expected[1]}x{expected[0]}"
                )
            if im.mode in ("L", "1"):
                gray = im.convert("L") if im.mode == "1" else im
                return np.asarray(gray, dtype=np.float64) / 255.0
            rgb = np.asarray(im.convert("RGB"), dtype=np.uint8)
        return to_intensity(rgb)
