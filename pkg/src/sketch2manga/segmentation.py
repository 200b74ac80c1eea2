"""Partition an illustration into connected, color-coherent regions.

K-means runs over RGB triples with a seeded k-means++ initialization so the
labeling is reproducible bit-for-bit. Cluster maps are then split into
maximal 4-connected regions, and per-region statistics are taken over the
rough screentoned map that drives the adaptive scaling stage.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .images import rgb_to_hsv, validate_color_image, validate_intensity_map

# Regions smaller than this are statistical noise; downstream scaling treats
# them as pass-through (scale factor pinned to 1).
PASS_THROUGH_MIN_PIXELS = 16

_ASSIGN_CHUNK = 1 << 16


@dataclass(frozen=True)
class RegionStats:
    """Per-region statistics over the rough manga intensity map.

    sigma is the population standard deviation, so single-pixel regions are
    well-defined (sigma = 0) and sigma never exceeds 0.5 on [0, 1] data.
    """

    region_id: int
    pixel_count: int
    sigma: float
    min_ir: float
    max_ir: float
    mean_color: tuple[float, float, float] | None = None
    mean_saturation: float | None = None

    @property
    def pass_through(self) -> bool:
        return self.pixel_count < PASS_THROUGH_MIN_PIXELS


def _assign(pixels: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nearest-center assignment; ties go to the lowest cluster index."""
    n = pixels.shape[0]
    labels = np.empty(n, dtype=np.int32)
    dists = np.empty(n, dtype=np.float64)
    for start in range(0, n, _ASSIGN_CHUNK):
        stop = min(start + _ASSIGN_CHUNK, n)
        chunk = pixels[start:stop]
        d = ((chunk[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        idx = np.argmin(d, axis=1)
        labels[start:stop] = idx
        dists[start:stop] = d[np.arange(stop - start), idx]
    return labels, dists


def _kmeans_pp_init(pixels: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: squared-distance-weighted draws from the pixels."""
    n = pixels.shape[0]
    centers = np.empty((k, 3), dtype=np.float64)
    centers[0] = pixels[int(rng.integers(n))]
    if k == 1:
        return centers
    d2 = ((pixels - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = float(d2.sum())
        if total <= 0.0:
            idx = int(rng.integers(n))
        else:
            r = rng.random() * total
            idx = int(np.searchsorted(np.cumsum(d2), r, side="right"))
            idx = min(idx, n - 1)
        centers[j] = pixels[idx]
        np.minimum(d2, ((pixels - centers[j]) ** 2).sum(axis=1), out=d2)
    return centers


def kmeans_colors(img: np.ndarray, k: int, seed: int, max_iters: int = 50) -> np.ndarray:
    """Cluster the illustration's RGB values with Lloyd's algorithm.

    Parameters
    ----------
    img : ColorImage to cluster.
    k : number of clusters; clusters left empty at convergence are dropped,
        so the returned labels are dense in 0..cluster_count.
    seed : drives the k-means++ initialization; fixed (img, k, seed,
        max_iters) always yields the identical label map.
    max_iters : Lloyd iteration cap; iteration also stops as soon as no
        assignment changes.

    Returns
    -------
    int32 label array of shape (h, w). Labels are cluster ids, not yet
    split into connected regions.
    """
    img = validate_color_image(img)
    if k < 1:
        raise ValueError(f"cluster count must be >= 1, got {k}")
    if max_iters < 1:
        raise ValueError(f"max_iters must be >= 1, got {max_iters}")
    h, w = img.shape[:2]
    pixels = img.reshape(-1, 3).astype(np.float64)
    n = pixels.shape[0]

    rng = np.random.default_rng(seed)
    centers = _kmeans_pp_init(pixels, k, rng)
    labels, dists = _assign(pixels, centers)

    for _ in range(max_iters):
        counts = np.bincount(labels, minlength=k).astype(np.float64)
        sums = np.empty((k, 3), dtype=np.float64)
        for ch in range(3):
            sums[:, ch] = np.bincount(labels, weights=pixels[:, ch], minlength=k)
        occupied = counts > 0
        centers[occupied] = sums[occupied] / counts[occupied, None]

        # Empty clusters are re-seeded from the point farthest from its
        # current center; repeated empties take successively farther points.
        if not occupied.all():
            far_order = np.argsort(-dists, kind="stable")
            next_far = 0
            for c in np.flatnonzero(~occupied):
                centers[c] = pixels[far_order[next_far]]
                next_far += 1

        new_labels, dists = _assign(pixels, centers)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels

    # Drop empty clusters so label ids are dense.
    present = np.unique(labels)
    if present.size < k:
        labels = np.searchsorted(present, labels).astype(np.int32)
    return labels.reshape(h, w)


def split_connected(clusters: np.ndarray) -> np.ndarray:
    """Split a cluster map into maximal 4-connected regions.

    Output labels are dense and canonical: regions are numbered by the
    raster position of their first pixel, so the result depends only on the
    partition, never on how the input clusters happened to be numbered.
    """
    clusters = np.asarray(clusters)
    if clusters.ndim != 2:
        raise ValueError(f"cluster map must be 2-D, got shape {clusters.shape}")
    out = np.empty(clusters.shape, dtype=np.int32)
    offset = 0
    for value in np.unique(clusters):
        mask = clusters == value
        comp, count = ndimage.label(mask)
        out[mask] = comp[mask] - 1 + offset
        offset += count
    return _relabel_by_first_occurrence(out)


def _relabel_by_first_occurrence(labels: np.ndarray) -> np.ndarray:
    flat = labels.ravel()
    values, first_pos = np.unique(flat, return_index=True)
    rank = np.empty(values.size, dtype=np.int32)
    rank[np.argsort(first_pos, kind="stable")] = np.arange(values.size, dtype=np.int32)
    lut = np.empty(int(values.max()) + 1, dtype=np.int32)
    lut[values] = rank
    return lut[flat].reshape(labels.shape)


def region_count(regions: np.ndarray) -> int:
    return int(regions.max()) + 1


def region_stats(
    regions: np.ndarray,
    rough: np.ndarray,
    image: np.ndarray | None = None,
) -> list[RegionStats]:
    """Population standard deviation, min, and max of the rough intensity per
    region, plus mean RGB and mean saturation when the source image is given.
    """
    regions = np.asarray(regions)
    rough = validate_intensity_map(rough)
    if regions.shape != rough.shape:
        raise ValueError(
            f"dimension mismatch: regions {regions.shape} vs rough {rough.shape}"
        )
    labels = regions.ravel()
    values = rough.ravel()
    n_regions = int(labels.max()) + 1

    counts = np.bincount(labels, minlength=n_regions)
    if (counts == 0).any():
        missing = int(np.flatnonzero(counts == 0)[0])
        raise ValueError(f"label map is not dense: region {missing} has no pixels")

    sums = np.bincount(labels, weights=values, minlength=n_regions)
    means = sums / counts
    dev = values - means[labels]
    var = np.bincount(labels, weights=dev * dev, minlength=n_regions) / counts
    sigma = np.sqrt(np.maximum(var, 0.0))

    order = np.argsort(labels, kind="stable")
    starts = np.searchsorted(labels[order], np.arange(n_regions))
    mins = np.minimum.reduceat(values[order], starts)
    maxs = np.maximum.reduceat(values[order], starts)

    mean_colors = None
    mean_sats = None
    if image is not None:
        image = validate_color_image(image)
        if image.shape[:2] != regions.shape:
            raise ValueError(
                f"dimension mismatch: regions {regions.shape} vs image {image.shape[:2]}"
            )
        flat_rgb = image.reshape(-1, 3).astype(np.float64)
        mean_colors = np.stack(
            [
                np.bincount(labels, weights=flat_rgb[:, ch], minlength=n_regions) / counts
                for ch in range(3)
            ],
            axis=1,
        )
        sat = rgb_to_hsv(image)[..., 1].ravel()
        mean_sats = np.bincount(labels, weights=sat, minlength=n_regions) / counts

    stats = []
    for rid in range(n_regions):
        stats.append(
            RegionStats(
                region_id=rid,
                pixel_count=int(counts[rid]),
                sigma=float(sigma[rid]),
                min_ir=float(mins[rid]),
                max_ir=float(maxs[rid]),
                mean_color=None if mean_colors is None else tuple(mean_colors[rid]),
                mean_saturation=None if mean_sats is None else float(mean_sats[rid]),
            )
        )
    return stats


def render_labels(labels: np.ndarray) -> np.ndarray:
    """Render a label map as an RGB image with well-separated region colors."""
    from .images import hsv_to_rgb

    labels = np.asarray(labels)
    n = int(labels.max()) + 1
    ids = np.arange(n, dtype=np.float64)
    palette_hsv = np.stack(
        [(ids * 137.508) % 360.0, np.full(n, 0.65), np.full(n, 0.95)], axis=-1
    )
    palette = hsv_to_rgb(palette_hsv[None, :, :])[0]
    return palette[labels]


def save_label_map(labels: np.ndarray, path) -> None:
    """Write a label map as a color-indexed PNG (palette wraps past 256)."""
    from PIL import Image

    labels = np.asarray(labels)
    n = min(int(labels.max()) + 1, 256)
    ids = np.arange(n, dtype=np.float64)
    palette_hsv = np.stack(
        [(ids * 137.508) % 360.0, np.full(n, 0.65), np.full(n, 0.95)], axis=-1
    )
    from .images import hsv_to_rgb

    palette = hsv_to_rgb(palette_hsv[None, :, :])[0]
    table = np.zeros((256, 3), dtype=np.uint8)
    table[:n] = palette
    im = Image.fromarray((labels % 256).astype(np.uint8), mode="P")
    im.putpalette(table.ravel().tolist())
    im.save(path, format="PNG")
