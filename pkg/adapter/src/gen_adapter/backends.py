"""Generation backends.

Every backend takes the decoded conditioning image plus the adapter config
and returns a PIL image of the same size. Conversion to 8-bit grayscale and
the dimension check happen in the caller, not here.
"""

from __future__ import annotations

from PIL import Image

from .config import AdapterConfig


class BackendUnavailable(RuntimeError):
    """The selected backend cannot run in this environment."""


def run_null(image: Image.Image, config: AdapterConfig) -> Image.Image:
    """Return the conditioning image unchanged (testing backend)."""
    return image


def _resolve_device(selector: str) -> str:
    import torch

    if selector != "auto":
        return selector
    if torch.cuda.is_available():
        return "cuda"
    if getattr(torch.backends, "mps", None) is not None and torch.backends.mps.is_available():
        return "mps"
    return "cpu"


def run_diffusion(image: Image.Image, config: AdapterConfig) -> Image.Image:
    """Generate a rough manga page conditioned on the intensity map."""
    try:
        import torch
        from diffusers import ControlNetModel, StableDiffusionControlNetPipeline
    except ImportError as exc:
        raise BackendUnavailable(
            "the diffusion backend needs the 'diffusion' extra installed "
            f"(torch, diffusers, transformers, accelerate): {exc}"
        ) from exc

    device = _resolve_device(config.device)
    dtype = torch.float16 if device == "cuda" else torch.float32
    controlnet = ControlNetModel.from_pretrained(config.controlnet, torch_dtype=dtype)
    pipe = StableDiffusionControlNetPipeline.from_pretrained(
        config.model, controlnet=controlnet, torch_dtype=dtype, safety_checker=None
    )
    pipe = pipe.to(device)

    # The UNet downsamples by 8, so odd sizes would come back altered and
    # trip the caller's dimension check instead of being silently resized.
    generator = torch.Generator(device="cpu").manual_seed(config.seed)
    result = pipe(
        prompt=config.prompt,
        negative_prompt=config.negative_prompt,
        image=image.convert("RGB"),
        num_inference_steps=config.steps,
        controlnet_conditioning_scale=float(config.strength),
        generator=generator,
        width=image.width,
        height=image.height,
    )
    return result.images[0]


BACKENDS = {
    "diffusion": run_diffusion,
    "null": run_null,
}
