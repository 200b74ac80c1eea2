"""Region-adaptive scaling: imprint rough screentones into the illustration.

Each region's scaling range widens with the standard deviation of the rough
manga over that region, so heavily screentoned regions receive a strong
imprint while flat regions are left alone:

    s_low  = 1 - w_low  * sigma
    s_high = 1 + w_high * sigma

Within a region, each pixel's factor interpolates across that range by the
rough intensity (dark rough pixels get the largest multiplier):

    s = s_high - (ir - min_ir) / (max_ir - min_ir) * (s_high - s_low)

The factor multiplies the saturation channel (or the lightness proxy) of the
illustration in HSV space; the scaled result converted back to grayscale is
the final manga.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .images import (
    hsv_to_rgb,
    quantize_unit,
    rgb_to_hsv,
    to_intensity,
    validate_color_image,
    validate_intensity_map,
)
from .segmentation import RegionStats

CHANNELS = ("saturation", "lightness")

_HSV_SATURATION = 1
_HSV_VALUE = 2


@dataclass(frozen=True)
class ScalingParams:
    """Weights and channel selection for the adaptive scaling stage.

    low_sat_fallback: regions whose mean saturation falls below this
    threshold switch to lightness scaling even in saturation mode, since
    multiplying near-zero saturation is a no-op and would leave achromatic
    regions without any screentone imprint.
    """

    w_low: float = 0.08
    w_high: float = 0.16
    channel: str = "saturation"
    histogram_match: bool = False
    low_sat_fallback: float = 0.1

    def __post_init__(self):
        if self.w_low < 0.0 or self.w_high < 0.0:
            raise ValueError(
                f"weights must be non-negative, got w_low={self.w_low}, w_high={self.w_high}"
            )
        if self.channel not in CHANNELS:
            raise ValueError(f"channel must be one of {CHANNELS}, got {self.channel!r}")
        if not (0.0 <= self.low_sat_fallback <= 1.0):
            raise ValueError(
                f"low_sat_fallback must lie in [0, 1], got {self.low_sat_fallback}"
            )


def scaling_range(sigma: float, params: ScalingParams) -> tuple[float, float]:
    """Per-region scaling bounds derived from the rough-manga deviation.

    With sigma on [0, 1] intensities (so sigma <= 0.5) and the default
    weights, s_low never drops below 0.96; the clamp to 0 only matters for
    user-supplied oversized w_low.
    """
    s_low = 1.0 - params.w_low * sigma
    if s_low < 0.0:
        s_low = 0.0
    s_high = 1.0 + params.w_high * sigma
    return s_low, s_high


def pixel_scale(ir, stats: RegionStats, scale_range: tuple[float, float]):
    """Interpolated per-pixel factor; accepts a scalar or an array of ir.

    Degenerate regions (max_ir == min_ir) scale by exactly 1: no screentone
    signal means no imprint.
    """
    s_low, s_high = scale_range
    ir = np.asarray(ir, dtype=np.float64)
    if stats.max_ir == stats.min_ir:
        ones = np.ones_like(ir)
        return float(ones) if ir.ndim == 0 else ones
    t = (ir - stats.min_ir) / (stats.max_ir - stats.min_ir)
    s = s_high - t * (s_high - s_low)
    return float(s) if ir.ndim == 0 else s


def _region_slices(regions: np.ndarray, n_regions: int):
    flat = regions.ravel()
    order = np.argsort(flat, kind="stable")
    starts = np.searchsorted(flat[order], np.arange(n_regions + 1))
    return order, starts


def region_channel(stats: RegionStats, params: ScalingParams) -> int:
    """HSV channel index this region is scaled on, applying the fallback."""
    if params.channel == "lightness":
        return _HSV_VALUE
    if (
        stats.mean_saturation is not None
        and stats.mean_saturation < params.low_sat_fallback
    ):
        return _HSV_VALUE
    return _HSV_SATURATION


def adaptive_scale(
    illustration: np.ndarray,
    rough: np.ndarray,
    regions: np.ndarray,
    stats: list[RegionStats],
    params: ScalingParams,
) -> np.ndarray:
    """Scale the illustration's color channel region by region.

    Pass-through regions (below the minimum pixel count) and degenerate
    regions are left bit-identical up to the HSV round trip.
    """
    illustration = validate_color_image(illustration)
    rough = validate_intensity_map(rough)
    regions = np.asarray(regions)
    if rough.shape != illustration.shape[:2] or regions.shape != illustration.shape[:2]:
        raise ValueError(
            f"dimension mismatch: illustration {illustration.shape[:2]}, "
            f"rough {rough.shape}, regions {regions.shape}"
        )
    n_regions = int(regions.max()) + 1
    by_id = {st.region_id: st for st in stats}
    for rid in range(n_regions):
        if rid not in by_id:
            raise ValueError(f"missing stats for region {rid}")

    hsv = rgb_to_hsv(illustration)
    channels = [np.ascontiguousarray(hsv[..., i]) for i in range(3)]
    rough_flat = rough.ravel()
    order, starts = _region_slices(regions, n_regions)

    for rid in range(n_regions):
        st = by_id[rid]
        if st.pass_through or st.max_ir == st.min_ir:
            continue
        rng = scaling_range(st.sigma, params)
        if rng[0] == 1.0 and rng[1] == 1.0:
            continue
        idx = order[starts[rid] : starts[rid + 1]]
        s = pixel_scale(rough_flat[idx], st, rng)
        target = channels[region_channel(st, params)].ravel()
        target[idx] = np.clip(target[idx] * s, 0.0, 1.0)

    return hsv_to_rgb(np.stack(channels, axis=-1))


def match_histogram(src: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """Monotone histogram matching on 256 quantized bins.

    Each source level maps to the smallest reference level whose CDF meets
    the source CDF; the comparison is done in exact integer arithmetic, and
    output values come from the reference's (quantized) value set.
    """
    src = validate_intensity_map(src)
    ref = validate_intensity_map(ref)
    src_q = quantize_unit(src)
    ref_q = quantize_unit(ref)
    n_src = src_q.size
    n_ref = ref_q.size

    src_cum = np.cumsum(np.bincount(src_q.ravel(), minlength=256)).astype(np.int64)
    ref_cum = np.cumsum(np.bincount(ref_q.ravel(), minlength=256)).astype(np.int64)
    # ref_cdf[b] >= src_cdf[a]  <=>  ref_cum[b] * n_src >= src_cum[a] * n_ref
    lut = np.searchsorted(ref_cum * n_src, src_cum * n_ref, side="left")
    lut = np.minimum(lut, 255).astype(np.float64)
    return lut[src_q] / 255.0


def compose_final(
    scaled: np.ndarray, rough: np.ndarray, params: ScalingParams
) -> np.ndarray:
    """Final manga: grayscale of the scaled illustration, optionally
    histogram-matched to the rough manga to restore its tonal distribution.
    """
    final = to_intensity(scaled)
    if params.histogram_match:
        final = match_histogram(final, rough)
    return final
