"""sketch2manga: screentoned manga from color illustrations.

The public surface mirrors the pipeline stages so each piece is usable on
its own: image I/O and color conversions, the builtin halftoner (plus the
external-generator wire contract), color/region segmentation, the
region-adaptive channel scaling, and the end-to-end pipeline runner.
"""

from .errors import (
    ConfigError,
    GeneratorError,
    GeneratorFailed,
    GeneratorOutputMismatch,
    GeneratorOutputMissing,
    PipelineError,
    StageError,
)
from .images import (
    checksum_intensity,
    hsv_to_rgb,
    load_image,
    load_intensity,
    quantize_unit,
    rgb_to_hsv,
    save_image,
    to_intensity,
)
from .pipeline import (
    PipelineConfig,
    RunReport,
    build_config,
    load_config_file,
    run_batch,
    run_pipeline,
)
from .scaling import (
    ScalingParams,
    adaptive_scale,
    compose_final,
    match_histogram,
    pixel_scale,
    scaling_range,
)
from .segmentation import (
    PASS_THROUGH_MIN_PIXELS,
    RegionStats,
    kmeans_colors,
    region_count,
    region_stats,
    split_connected,
)
from .toner import (
    PatternSpec,
    bayer_matrix,
    black_coverage,
    run_external_generator,
    synthesize,
    validate_command_template,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "GeneratorError",
    "GeneratorFailed",
    "GeneratorOutputMismatch",
    "GeneratorOutputMissing",
    "PASS_THROUGH_MIN_PIXELS",
    "PatternSpec",
    "PipelineConfig",
    "PipelineError",
    "RegionStats",
    "RunReport",
    "ScalingParams",
    "StageError",
    "adaptive_scale",
    "bayer_matrix",
    "black_coverage",
    "build_config",
    "checksum_intensity",
    "compose_final",
    "hsv_to_rgb",
    "kmeans_colors",
    "load_config_file",
    "load_image",
    "load_intensity",
    "match_histogram",
    "pixel_scale",
    "quantize_unit",
    "region_count",
    "region_stats",
    "rgb_to_hsv",
    "run_batch",
    "run_external_generator",
    "run_pipeline",
    "save_image",
    "scaling_range",
    "split_connected",
    "synthesize",
    "to_intensity",
    "validate_command_template",
    "__version__",
]
