"""Config-driven sweep engine producing the paper-style result tables.

Three sweeps are supported: effective DoF over (frequency, distance), spectral
efficiency over (distance, SNR), and spectral efficiency over distance at the
highest configured SNR.  Each sweep emits deterministic CSV rows; rerunning a
sweep with the same config (seed included) is byte-identical.

Config files are flat ``key = value`` lines whose keys match the
ExperimentConfig field names; list values are comma separated and the optional
geometry fields accept ``auto``.
"""

from __future__ import annotations

import dataclasses
import io
from dataclasses import dataclass
from math import sqrt

import numpy as np

from .beamspace import (
    DEFAULT_CANDIDATE_CAP,
    DEFAULT_DOF_THRESHOLD,
    decompose,
    enumerate_candidates,
)
from .capacity import (
    SnrSpec,
    activation_probabilities,
    asymptotic_capacity,
    bbs_capacity,
    candidate_stats,
    se_upper_bound,
)
from .channel import (
    SPEED_OF_LIGHT,
    ArraySpec,
    SceneConfig,
    frobenius_normalized,
    scene_fraunhofer_distance,
    two_ray_channel,
)
from .montecarlo import build_mixture, estimate_se

HALF_WAVELENGTH_30GHZ = SPEED_OF_LIGHT / 30e9 / 2.0

SNR_MODES = ("normalized", "physical")

CSV_COORD_COLUMNS = ("frequency_hz", "distance_m", "snr_db")
CSV_VALUE_COLUMNS = (
    "dof",
    "k",
    "c_bm_asymptotic",
    "c_bbs",
    "gap",
    "se_mc_mean",
    "se_mc_stderr",
)


class ConfigError(ValueError):
    """Malformed experiment configuration (unknown key, bad value, bad combination)."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Flat experiment description; field names double as config-file keys.

    ``*_element_spacing`` left as ``None`` means half a wavelength at the
    scene's carrier (recomputed per frequency point in the DoF sweep);
    scatterer offsets left as ``None`` default to distance/2 and distance/4
    and, like explicit offsets, scale proportionally when a sweep changes the
    distance.  ``mc_samples = 0`` disables the Monte-Carlo columns.
    """

    carrier_frequency: float = 30e9
    tx_num_elements: int = 256
    tx_element_spacing: float | None = None
    tx_element_gain: float = 1.0
    rx_num_elements: int = 256
    rx_element_spacing: float | None = None
    rx_element_gain: float = 1.0
    distance: float = 2.0
    scatterer_offset_axial: float | None = None
    scatterer_offset_lateral: float | None = None
    reflection_coefficient: complex = 0.1 + 0.0j
    n_rf: int = 1
    dof_threshold: float = DEFAULT_DOF_THRESHOLD
    candidate_cap: int = DEFAULT_CANDIDATE_CAP
    snr_points: tuple[float, ...] = tuple(float(v) for v in range(-20, 31, 2))
    distance_points: tuple[float, ...] = (2.0, 4.0, 8.0)
    frequency_points: tuple[float, ...] = (5e9, 30e9, 100e9)
    mc_samples: int = 200_000
    seed: int = 7041
    snr_mode: str = "normalized"
    output_path: str = "sweep.csv"


@dataclass(frozen=True)
class SweepRow:
    """One sweep point; coordinates absent from the sweep stay None."""

    frequency_hz: float | None = None
    distance_m: float | None = None
    snr_db: float | None = None
    dof: int = 0
    k: int = 0
    c_bm_asymptotic: float | None = None
    c_bbs: float | None = None
    gap: float | None = None
    se_mc_mean: float | None = None
    se_mc_stderr: float | None = None


@dataclass(frozen=True)
class PointAnalysis:
    """Full single-point pipeline output (channel -> candidates -> capacity)."""

    scene: SceneConfig
    decomposition: object
    candidates: object
    stats: object
    distribution: object
    snr: SnrSpec
    c_bm_asymptotic: float
    c_bbs: float
    se_upper_bound_at_p: float
    gap: float
    fraunhofer_distance: float


def log_distance_grid(start: float, stop: float, ratio: float = sqrt(2.0)):
    """Geometric distance grid from start towards stop, stop always included."""
    if not 0 < start < stop:
        raise ValueError("need 0 < start < stop")
    points = []
    k = 0
    while (d := start * ratio**k) < stop * (1 - 1e-12):
        points.append(d)
        k += 1
    points.append(stop)
    return tuple(points)


def base_config(**overrides) -> ExperimentConfig:
    """Paper-style defaults: 30 GHz, 256x256 half-wavelength ULAs, one RF chain."""
    return dataclasses.replace(ExperimentConfig(), **overrides)


def snr_sweep_config(**overrides) -> ExperimentConfig:
    """SE vs SNR at 2/4/8 m (defaults already match); Fig.-3-style table."""
    return base_config(output_path="snr_sweep.csv", **overrides)


def distance_sweep_config(**overrides) -> ExperimentConfig:
    """SE vs distance on a geometric 2..300 m grid at the top SNR; Fig.-4 style."""
    return base_config(
        distance_points=log_distance_grid(2.0, 300.0),
        output_path="distance_sweep.csv",
        **overrides,
    )


def dof_sweep_config(**overrides) -> ExperimentConfig:
    """DoF vs distance at 5/30/100 GHz on a 1..300 m grid; Fig.-2 style.

    Element spacing is pinned to the 30 GHz half-wavelength so the physical
    aperture is the same for every frequency point; with per-frequency
    half-wavelength spacing the frequency ordering of the DoF curves inverts.
    """
    return base_config(
        tx_element_spacing=HALF_WAVELENGTH_30GHZ,
        rx_element_spacing=HALF_WAVELENGTH_30GHZ,
        distance_points=log_distance_grid(1.0, 300.0),
        mc_samples=0,
        output_path="dof_sweep.csv",
        **overrides,
    )


# ---------------------------------------------------------------------------
# config file format


def _parse_float(text):
    return float(text)


def _parse_int(text):
    value = int(text)
    return value


def _parse_optional_float(text):
    if text.lower() in ("auto", "none", ""):
        return None
    return float(text)


def _parse_complex(text):
    return complex(text.replace(" ", ""))


def _parse_float_list(text):
    items = [part.strip() for part in text.split(",") if part.strip()]
    if not items:
        raise ValueError("empty list")
    return tuple(float(part) for part in items)


def _parse_mode(text):
    mode = text.strip().lower()
    if mode not in SNR_MODES:
        raise ValueError(f"must be one of {SNR_MODES}")
    return mode


_FIELD_PARSERS = {
    "carrier_frequency": _parse_float,
    "tx_num_elements": _parse_int,
    "tx_element_spacing": _parse_optional_float,
    "tx_element_gain": _parse_float,
    "rx_num_elements": _parse_int,
    "rx_element_spacing": _parse_optional_float,
    "rx_element_gain": _parse_float,
    "distance": _parse_float,
    "scatterer_offset_axial": _parse_optional_float,
    "scatterer_offset_lateral": _parse_optional_float,
    "reflection_coefficient": _parse_complex,
    "n_rf": _parse_int,
    "dof_threshold": _parse_float,
    "candidate_cap": _parse_int,
    "snr_points": _parse_float_list,
    "distance_points": _parse_float_list,
    "frequency_points": _parse_float_list,
    "mc_samples": _parse_int,
    "seed": _parse_int,
    "snr_mode": _parse_mode,
    "output_path": str.strip,
}


def parse_override(key: str, raw_value: str):
    """Parse one key=value pair, rejecting unknown keys by name."""
    if key not in _FIELD_PARSERS:
        raise ConfigError(f"unknown config key '{key}'")
    try:
        return _FIELD_PARSERS[key](raw_value)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid value for '{key}': {raw_value!r} ({exc})") from exc


def apply_overrides(config: ExperimentConfig, overrides: dict) -> ExperimentConfig:
    """Apply raw string key=value overrides on top of an existing config."""
    parsed = {key: parse_override(key, value) for key, value in overrides.items()}
    return validate_config(dataclasses.replace(config, **parsed))


def parse_config(text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Parse ``key = value`` lines ('#' starts a comment) on top of defaults."""
    values = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw_line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    config = base if base is not None else ExperimentConfig()
    return apply_overrides(config, values)


def load_config(path, base: ExperimentConfig | None = None) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config(text, base)


def validate_config(config: ExperimentConfig) -> ExperimentConfig:
    """Check field-level invariants; returns the config for chaining."""
    if config.carrier_frequency <= 0:
        raise ConfigError("carrier_frequency must be > 0")
    if config.distance <= 0:
        raise ConfigError("distance must be > 0")
    for side in ("tx", "rx"):
        if getattr(config, f"{side}_num_elements") < 1:
            raise ConfigError(f"{side}_num_elements must be >= 1")
        spacing = getattr(config, f"{side}_element_spacing")
        if spacing is not None and spacing <= 0:
            raise ConfigError(f"{side}_element_spacing must be > 0 or auto")
        if getattr(config, f"{side}_element_gain") <= 0:
            raise ConfigError(f"{side}_element_gain must be > 0")
    if abs(config.reflection_coefficient) > 1:
        raise ConfigError("|reflection_coefficient| must be <= 1")
    if config.n_rf < 1:
        raise ConfigError("n_rf must be >= 1")
    if not 0 < config.dof_threshold < 1:
        raise ConfigError("dof_threshold must be in (0, 1)")
    if config.candidate_cap < 1:
        raise ConfigError("candidate_cap must be >= 1")
    if config.mc_samples != 0 and config.mc_samples < 100:
        raise ConfigError("mc_samples must be 0 (disabled) or >= 100")
    if config.seed < 0:
        raise ConfigError("seed must be a non-negative integer")
    if config.snr_mode not in SNR_MODES:
        raise ConfigError(f"snr_mode must be one of {SNR_MODES}")
    scene_for(config)  # geometry invariants (scatterer placement etc.)
    return config


# ---------------------------------------------------------------------------
# pipeline


def scene_for(config: ExperimentConfig, distance=None, frequency=None) -> SceneConfig:
    """SceneConfig at a sweep point; scatterer offsets scale with distance."""
    d = config.distance if distance is None else distance
    f = config.carrier_frequency if frequency is None else frequency
    half_wavelength = SPEED_OF_LIGHT / f / 2.0

    def offset(value, default_frac):
        frac = default_frac if value is None else value / config.distance
        return frac * d

    try:
        return SceneConfig(
            carrier_frequency=f,
            tx_array=ArraySpec(
                config.tx_num_elements,
                config.tx_element_spacing or half_wavelength,
                config.tx_element_gain,
            ),
            rx_array=ArraySpec(
                config.rx_num_elements,
                config.rx_element_spacing or half_wavelength,
                config.rx_element_gain,
            ),
            distance=d,
            scatterer_offset_axial=offset(config.scatterer_offset_axial, 0.5),
            scatterer_offset_lateral=offset(config.scatterer_offset_lateral, 0.25),
            reflection_coefficient=config.reflection_coefficient,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _decompose_scene(config, scene):
    channel = two_ray_channel(scene)
    entries = channel.entries
    if config.snr_mode == "normalized":
        entries = frobenius_normalized(entries)
    return decompose(entries, config.dof_threshold)


def point_analysis(config: ExperimentConfig, distance=None, frequency=None, snr_db=None) -> PointAnalysis:
    """Single-point closed-form analysis at max(snr_points) unless overridden."""
    if snr_db is None:
        if not config.snr_points:
            raise ConfigError("snr_points must be non-empty")
        snr_db = max(config.snr_points)
    scene = scene_for(config, distance=distance, frequency=frequency)
    decomp = _decompose_scene(config, scene)
    candidates = enumerate_candidates(decomp, config.n_rf, config.candidate_cap)
    snr = SnrSpec(snr_db)
    stats = candidate_stats(decomp, candidates, snr)
    dist = activation_probabilities(stats)
    c_bm = asymptotic_capacity(stats)
    c_bbs = bbs_capacity(stats)
    return PointAnalysis(
        scene=scene,
        decomposition=decomp,
        candidates=candidates,
        stats=stats,
        distribution=dist,
        snr=snr,
        c_bm_asymptotic=c_bm,
        c_bbs=c_bbs,
        se_upper_bound_at_p=se_upper_bound(dist, stats),
        gap=c_bm - c_bbs,
        fraunhofer_distance=scene_fraunhofer_distance(scene),
    )


def _coordinate_context(exc, **coords):
    where = ", ".join(f"{name}={value:g}" for name, value in coords.items() if value is not None)
    return type(exc)(f"{exc} (at {where})")


def run_dof_sweep(config: ExperimentConfig, workers: int = 1):
    """One row per (frequency, distance): effective DoF and candidate count."""
    if not config.frequency_points or not config.distance_points:
        raise ConfigError("dof sweep needs frequency_points and distance_points")
    rows = []
    for f in config.frequency_points:
        for d in config.distance_points:
            try:
                scene = scene_for(config, distance=d, frequency=f)
                decomp = _decompose_scene(config, scene)
                candidates = enumerate_candidates(decomp, config.n_rf, config.candidate_cap)
            except ValueError as exc:
                raise _coordinate_context(exc, frequency_hz=f, distance_m=d) from exc
            rows.append(
                SweepRow(frequency_hz=f, distance_m=d, dof=decomp.dof, k=len(candidates))
            )
    return rows


def _se_point(config, decomp, candidates, snr, stream, workers):
    """Closed-form + optional Monte-Carlo fields for one (scene, SNR) point."""
    stats = candidate_stats(decomp, candidates, snr)
    dist = activation_probabilities(stats)
    c_bm = asymptotic_capacity(stats)
    c_bbs = bbs_capacity(stats)
    se_mean = se_stderr = None
    if config.mc_samples > 0:
        model = build_mixture(decomp, candidates, snr, dist.probabilities)
        estimate = estimate_se(model, config.mc_samples, config.seed, stream=stream, workers=workers)
        se_mean, se_stderr = estimate.mean, estimate.std_error
    return dict(
        dof=decomp.dof,
        k=len(candidates),
        c_bm_asymptotic=c_bm,
        c_bbs=c_bbs,
        gap=c_bm - c_bbs,
        se_mc_mean=se_mean,
        se_mc_stderr=se_stderr,
    )


def run_snr_sweep(config: ExperimentConfig, workers: int = 1):
    """One row per (distance, SNR) with closed-form capacities and MC SE at p*."""
    if not config.snr_points:
        raise ConfigError("snr sweep needs snr_points")
    if not config.distance_points:
        raise ConfigError("snr sweep needs distance_points")
    rows = []
    stream = 0
    for d in config.distance_points:
        try:
            scene = scene_for(config, distance=d)
            decomp = _decompose_scene(config, scene)
            candidates = enumerate_candidates(decomp, config.n_rf, config.candidate_cap)
        except ValueError as exc:
            raise _coordinate_context(exc, distance_m=d) from exc
        for snr_db in config.snr_points:
            fields = _se_point(config, decomp, candidates, SnrSpec(snr_db), stream, workers)
            rows.append(SweepRow(distance_m=d, snr_db=snr_db, **fields))
            stream += 1
    return rows


def run_distance_sweep(config: ExperimentConfig, workers: int = 1):
    """One row per distance at the highest configured SNR."""
    if not config.distance_points:
        raise ConfigError("distance sweep needs distance_points")
    if not config.snr_points:
        raise ConfigError("distance sweep needs snr_points")
    snr = SnrSpec(max(config.snr_points))
    rows = []
    for stream, d in enumerate(config.distance_points):
        try:
            scene = scene_for(config, distance=d)
            decomp = _decompose_scene(config, scene)
            candidates = enumerate_candidates(decomp, config.n_rf, config.candidate_cap)
        except ValueError as exc:
            raise _coordinate_context(exc, distance_m=d) from exc
        fields = _se_point(config, decomp, candidates, snr, stream, workers)
        rows.append(SweepRow(distance_m=d, snr_db=snr.snr_db, **fields))
    return rows


# ---------------------------------------------------------------------------
# CSV


def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{value:.9g}"


def csv_columns(rows):
    coords = [
        name for name in CSV_COORD_COLUMNS
        if any(getattr(row, name) is not None for row in rows)
    ]
    return coords + list(CSV_VALUE_COLUMNS)


def rows_to_csv(rows) -> str:
    """Render sweep rows as CSV text (deterministic 9-significant-digit floats)."""
    if not rows:
        raise ValueError("no rows to write")
    columns = csv_columns(rows)
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_format_cell(getattr(row, name)) for name in columns) + "\n")
    return buf.getvalue()


def write_csv(rows, path):
    """Write sweep rows to ``path`` as UTF-8 CSV."""
    text = rows_to_csv(rows)
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def read_csv(path):
    """Parse a sweep CSV back into SweepRow objects (empty cells become None)."""
    with open(path, "r", encoding="utf-8") as handle:
        lines = [line.rstrip("\n") for line in handle if line.strip()]
    if not lines:
        raise ValueError(f"empty CSV: {path}")
    header = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        kwargs = {}
        for name, cell in zip(header, cells):
            if cell == "":
                kwargs[name] = None
            elif name in ("dof", "k"):
                kwargs[name] = int(cell)
            else:
                kwargs[name] = float(cell)
        rows.append(SweepRow(**kwargs))
    return rows
