"""Input decoding, backend dispatch, and output normalization."""

from __future__ import annotations

from pathlib import Path
from typing import Callable

from PIL import Image

from .backends import BACKENDS
from .config import AdapterConfig


class InputUnreadable(ValueError):
    """The conditioning image is missing or cannot be decoded."""


class DimensionMismatch(RuntimeError):
    """The backend returned an image whose size differs from the input."""


def default_output_path(input_path: Path, template: str) -> Path:
    """Expand the output template against the input path.

    Supported fields: {stem} (input filename without suffix), {dir}
    (input's directory). A bare relative result lands next to the input.
    """
    expanded = template.format(stem=input_path.stem, dir=str(input_path.parent))
    out = Path(expanded)
    if not out.is_absolute() and out.parent == Path("."):
        out = input_path.parent / out
    return out


def _decode_input(input_path: Path) -> Image.Image:
    if not input_path.is_file():
        raise InputUnreadable(f"cannot read input image: {input_path}: no such file")
    try:
        with Image.open(input_path) as handle:
            handle.load()
            return handle.copy()
    except OSError as exc:
        raise InputUnreadable(f"cannot read input image: {input_path}: {exc}") from exc


def generate(
    input_path: Path | str,
    output_path: Path | str,
    config: AdapterConfig,
    backend_fn: Callable[[Image.Image, AdapterConfig], Image.Image] | None = None,
) -> Path:
    """Run one generation and write an 8-bit grayscale PNG.

    The output always matches the input dimensions; a backend that returns
    anything else is an error. Color backend output is converted to
    grayscale, never resized. Returns the output path.
    """
    config.validate()
    input_path = Path(input_path)
    output_path = Path(output_path)
    image = _decode_input(input_path)
    run = backend_fn if backend_fn is not None else BACKENDS[config.backend]
    produced = run(image, config)
    if produced.size != image.size:
        raise DimensionMismatch(
            f"backend returned {produced.width}x{produced.height} for a "
            f"{image.width}x{image.height} input; refusing to resize"
        )
    if produced.mode != "L":
        produced = produced.convert("L")
    produced.save(output_path, format="PNG")
    return output_path
