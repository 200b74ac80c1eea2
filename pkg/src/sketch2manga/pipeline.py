"""End-to-end orchestration: illustration in, screentoned manga out.

Stage order: (optional external colorization) -> intensity map -> rough
manga generation -> color clustering -> connected-region split -> region
statistics -> adaptive scaling -> grayscale composition -> save. Every
stage is timed and any failure aborts with the stage's name attached.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from PIL import Image

from . import images, scaling, segmentation, toner
from .errors import ConfigError, StageError

INPUT_KINDS = ("illustration", "sketch")

INTERMEDIATE_NAMES = ("intensity.png", "rough.png", "labels.png", "scaled.png")


@dataclass
class PipelineConfig:
    input_path: str = ""
    output_path: str = ""
    generator: str = "builtin"
    pattern: toner.PatternSpec = field(default_factory=toner.PatternSpec)
    kmeans_k: int = 8
    kmeans_max_iters: int = 50
    seed: int = 0
    scaling: scaling.ScalingParams = field(default_factory=scaling.ScalingParams)
    dump_intermediates: bool = False
    input_kind: str = "illustration"
    colorizer: str | None = None

    def validate(self) -> None:
        if not self.input_path:
            raise ConfigError("an input path is required")
        if not self.output_path:
            raise ConfigError("an output path is required")
        if self.kmeans_k < 1:
            raise ConfigError(f"--kmeans-k must be >= 1, got {self.kmeans_k}")
        if self.kmeans_max_iters < 1:
            raise ConfigError(
                f"kmeans_max_iters must be >= 1, got {self.kmeans_max_iters}"
            )
        if self.input_kind not in INPUT_KINDS:
            raise ConfigError(
                f"input_kind must be one of {INPUT_KINDS}, got {self.input_kind!r}"
            )
        if self.input_kind == "sketch" and not self.colorizer:
            raise ConfigError(
                "input_kind 'sketch' requires an external --colorizer command "
                "(no colorization model is bundled)"
            )
        if self.generator != "builtin":
            try:
                toner.validate_command_template(self.generator)
            except ValueError as e:
                raise ConfigError(str(e)) from e
        if self.colorizer:
            try:
                toner.validate_command_template(self.colorizer)
            except ValueError as e:
                raise ConfigError(str(e)) from e


@dataclass
class RunReport:
    stages: list[tuple[str, float]]
    region_count: int
    output_checksum: str
    output_path: str

    def lines(self) -> list[str]:
        out = ["stage timings:"]
        out += [f"  {name}: {seconds:.3f}s" for name, seconds in self.stages]
        out.append(f"regions: {self.region_count}")
        out.append(f"checksum: sha256:{self.output_checksum}")
        out.append(f"output: {self.output_path}")
        return out


@contextmanager
def _stage(name: str, timings: list[tuple[str, float]]):
    start = time.perf_counter()
    try:
        yield
    except StageError:
        raise
    except Exception as e:
        raise StageError(name, e) from e
    timings.append((name, time.perf_counter() - start))


def _colorize_external(input_path: Path, command: str) -> np.ndarray:
    """Run the external colorizer over the raw input file (same wire
    contract as the generator) and decode its output as a color image."""
    import tempfile

    with Image.open(input_path) as im:
        expected = (im.height, im.width)
    with tempfile.TemporaryDirectory(prefix="sketch2manga-colorize-") as tmp:
        out_path = Path(tmp) / "out.png"
        toner._invoke_wire_command(command, input_path, out_path)
        illustration = images.load_image(out_path)
    if illustration.shape[:2] != expected:
        from .errors import GeneratorOutputMismatch

        raise GeneratorOutputMismatch(
            f"colorizer output is {illustration.shape[1]}x{illustration.shape[0]}, "
            f"expected {expected[1]}x{expected[0]}"
        )
    return illustration


def run_pipeline(config: PipelineConfig, dump_dir: Path | None = None) -> RunReport:
    """Execute the full pipeline for a single image and return the report.

    When intermediates are requested they are written next to the output
    unless an explicit dump_dir overrides that.
    """
    config.validate()
    timings: list[tuple[str, float]] = []
    if config.dump_intermediates and dump_dir is None:
        dump_dir = Path(config.output_path).parent
    elif not config.dump_intermediates:
        dump_dir = None
    if dump_dir is not None:
        dump_dir.mkdir(parents=True, exist_ok=True)

    with _stage("load", timings):
        if config.input_kind == "sketch":
            source_path = Path(config.input_path)
            if not source_path.is_file():
                raise FileNotFoundError(f"no such image file: {source_path}")
        else:
            illustration = images.load_image(config.input_path)

    if config.input_kind == "sketch":
        with _stage("colorize", timings):
            illustration = _colorize_external(source_path, config.colorizer)

    with _stage("intensity", timings):
        intensity = images.to_intensity(illustration)
    if dump_dir is not None:
        images.save_image(intensity, dump_dir / "intensity.png")

    with _stage("generate", timings):
        if config.generator == "builtin":
            rough = toner.synthesize(intensity, config.pattern)
        else:
            rough = toner.run_external_generator(intensity, config.generator)
    if dump_dir is not None:
        images.save_image(rough, dump_dir / "rough.png")

    with _stage("cluster", timings):
        clusters = segmentation.kmeans_colors(
            illustration, config.kmeans_k, config.seed, config.kmeans_max_iters
        )

    with _stage("regions", timings):
        regions = segmentation.split_connected(clusters)
    if dump_dir is not None:
        segmentation.save_label_map(regions, dump_dir / "labels.png")

    with _stage("stats", timings):
        stats = segmentation.region_stats(regions, rough, image=illustration)

    with _stage("scale", timings):
        scaled = scaling.adaptive_scale(
            illustration, rough, regions, stats, config.scaling
        )
    if dump_dir is not None:
        images.save_image(scaled, dump_dir / "scaled.png")

    with _stage("compose", timings):
        final = scaling.compose_final(scaled, rough, config.scaling)

    with _stage("save", timings):
        images.ensure_parent_dir(config.output_path)
        images.save_image(final, config.output_path)

    return RunReport(
        stages=timings,
        region_count=segmentation.region_count(regions),
        output_checksum=images.checksum_intensity(final),
        output_path=str(config.output_path),
    )


def run_batch(config: PipelineConfig) -> list[RunReport]:
    """Process every PNG in the input directory into the output directory.

    Per-image results are independent; images are processed in sorted order
    so reports are stable. Intermediates, when requested, go into a
    '<stem>_intermediates' subdirectory per image.
    """
    config.validate()
    in_dir = Path(config.input_path)
    out_dir = Path(config.output_path)
    pngs = sorted(p for p in in_dir.iterdir() if p.suffix.lower() == ".png")
    if not pngs:
        raise StageError("load", FileNotFoundError(f"no PNG files in {in_dir}"))
    out_dir.mkdir(parents=True, exist_ok=True)

    reports = []
    for png in pngs:
        per_image = replace(
            config, input_path=str(png), output_path=str(out_dir / png.name)
        )
        sub = None
        if config.dump_intermediates:
            sub = out_dir / f"{png.stem}_intermediates"
            sub.mkdir(exist_ok=True)
        reports.append(run_pipeline(per_image, dump_dir=sub))
    return reports


# --- configuration parsing ---------------------------------------------------

_STR_KEYS = {"input", "output", "generator", "pattern", "channel", "input_kind",
             "colorizer"}
_FLOAT_KEYS = {"frequency", "angle", "black_point", "white_point", "w_low",
               "w_high", "low_sat_fallback"}
_INT_KEYS = {"kmeans_k", "kmeans_max_iters", "seed", "bayer_order"}
_BOOL_KEYS = {"match_hist", "dump_intermediates"}
CONFIG_KEYS = _STR_KEYS | _FLOAT_KEYS | _INT_KEYS | _BOOL_KEYS

_TRUE_WORDS = {"true", "1", "yes", "on"}
_FALSE_WORDS = {"false", "0", "no", "off"}


def _coerce(key: str, raw: str):
    if key in _STR_KEYS:
        if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in "\"'":
            raw = raw[1:-1]
        return raw
    if key in _FLOAT_KEYS:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"config key {key!r} needs a number, got {raw!r}")
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"config key {key!r} needs an integer, got {raw!r}")
    word = raw.strip().lower()
    if word in _TRUE_WORDS:
        return True
    if word in _FALSE_WORDS:
        return False
    raise ConfigError(f"config key {key!r} needs true/false, got {raw!r}")


def load_config_file(path) -> dict:
    """Parse a flat key=value config file.

    Blank lines and lines starting with '#' are ignored. Unknown keys are
    rejected rather than silently dropped so typos surface immediately.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"no such config file: {path}")
    values = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(
                f"{path}:{lineno}: expected key=value, got {stripped!r}"
            )
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = _coerce(key, raw.strip())
    return values


def build_config(cli_values: dict, config_file=None) -> PipelineConfig:
    """Merge defaults, config-file values, and CLI flag values (in that
    precedence order, CLI strongest) into a validated PipelineConfig.

    cli_values holds only the flags the user actually passed; None values
    are treated as absent.
    """
    merged: dict = {}
    if config_file is not None:
        merged.update(load_config_file(config_file))
    merged.update({k: v for k, v in cli_values.items() if v is not None})

    for key in merged:
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")

    pattern_kwargs = {}
    if "pattern" in merged:
        pattern_kwargs["family"] = merged["pattern"]
    if "frequency" in merged:
        pattern_kwargs["frequency"] = merged["frequency"]
    if "angle" in merged:
        pattern_kwargs["angle"] = merged["angle"]
    if "bayer_order" in merged:
        pattern_kwargs["bayer_order"] = merged["bayer_order"]
    if "black_point" in merged:
        pattern_kwargs["black_point"] = merged["black_point"]
    if "white_point" in merged:
        pattern_kwargs["white_point"] = merged["white_point"]

    scaling_kwargs = {}
    if "w_low" in merged:
        scaling_kwargs["w_low"] = merged["w_low"]
    if "w_high" in merged:
        scaling_kwargs["w_high"] = merged["w_high"]
    if "channel" in merged:
        scaling_kwargs["channel"] = merged["channel"]
    if "match_hist" in merged:
        scaling_kwargs["histogram_match"] = merged["match_hist"]
    if "low_sat_fallback" in merged:
        scaling_kwargs["low_sat_fallback"] = merged["low_sat_fallback"]

    try:
        pattern = toner.PatternSpec(**pattern_kwargs)
        scaling_params = scaling.ScalingParams(**scaling_kwargs)
    except ValueError as e:
        raise ConfigError(str(e)) from e

    config = PipelineConfig(
        input_path=merged.get("input", ""),
        output_path=merged.get("output", ""),
        generator=merged.get("generator", "builtin"),
        pattern=pattern,
        kmeans_k=merged.get("kmeans_k", 8),
        kmeans_max_iters=merged.get("kmeans_max_iters", 50),
        seed=merged.get("seed", 0),
        scaling=scaling_params,
        dump_intermediates=merged.get("dump_intermediates", False),
        input_kind=merged.get("input_kind", "illustration"),
        colorizer=merged.get("colorizer"),
    )
    config.validate()
    return config
