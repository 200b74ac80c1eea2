"""Configuration for the generator adapter."""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_PROMPT = "masterpiece, best quality, solo, illustration, simple background"
DEFAULT_NEGATIVE_PROMPT = (
    "nsfw, nude, lowres, bad anatomy, bad hands, worst quality, low quality, "
    "normal quality, jpeg, jpeg artifacts"
)

DEFAULT_MODEL = "runwayml/stable-diffusion-v1-5"
DEFAULT_CONTROLNET = "lllyasviel/control_v11p_sd15_lineart"

BACKEND_NAMES = ("diffusion", "null")
DEVICE_NAMES = ("auto", "cpu", "cuda", "mps")

DEFAULT_OUTPUT_TEMPLATE = "{stem}_manga.png"


@dataclass(frozen=True)
class AdapterConfig:
    """Settings for one generation call.

    The stock checkpoints below are stand-ins: the finetuned weights used to
    produce the reference results were never published, so outputs from the
    diffusion backend will differ in style from those figures.
    """

    backend: str = "diffusion"
    model: str = DEFAULT_MODEL
    controlnet: str = DEFAULT_CONTROLNET
    strength: float = 1.0
    prompt: str = DEFAULT_PROMPT
    negative_prompt: str = DEFAULT_NEGATIVE_PROMPT
    device: str = "auto"
    steps: int = 20
    seed: int = 0
    output_template: str = DEFAULT_OUTPUT_TEMPLATE

    def validate(self) -> None:
        if self.backend not in BACKEND_NAMES:
            raise ValueError(f"unknown backend {self.backend!r}; choose from {BACKEND_NAMES}")
        if self.device not in DEVICE_NAMES:
            raise ValueError(f"unknown device {self.device!r}; choose from {DEVICE_NAMES}")
        if not 0.0 <= self.strength <= 2.0:
            raise ValueError(f"strength must lie in [0, 2], got {self.strength}")
        if self.steps < 1:
            raise ValueError(f"steps must be at least 1, got {self.steps}")
        if not self.output_template:
            raise ValueError("output_template must be non-empty")
