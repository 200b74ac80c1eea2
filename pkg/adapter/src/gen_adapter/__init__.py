"""Generator adapter exposing diffusion models through a simple CLI contract."""

from .backends import BACKENDS, BackendUnavailable, run_diffusion, run_null
from .config import (
    BACKEND_NAMES,
    DEFAULT_CONTROLNET,
    DEFAULT_MODEL,
    DEFAULT_NEGATIVE_PROMPT,
    DEFAULT_OUTPUT_TEMPLATE,
    DEFAULT_PROMPT,
    DEVICE_NAMES,
    AdapterConfig,
)
from .core import DimensionMismatch, InputUnreadable, default_output_path, generate

__all__ = [
    "AdapterConfig",
    "BACKENDS",
    "BACKEND_NAMES",
    "BackendUnavailable",
    "DEFAULT_CONTROLNET",
    "DEFAULT_MODEL",
    "DEFAULT_NEGATIVE_PROMPT",
    "DEFAULT_OUTPUT_TEMPLATE",
    "DEFAULT_PROMPT",
    "DEVICE_NAMES",
    "DimensionMismatch",
    "InputUnreadable",
    "default_output_path",
    "generate",
    "run_diffusion",
    "run_null",
]

__version__ = "0.1.0"
