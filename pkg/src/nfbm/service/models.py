"""Pydantic request/response schemas for the simulation service."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict

from ..experiments import ExperimentConfig, validate_config

_DEFAULTS = ExperimentConfig()


class ExperimentRequest(BaseModel):
    """Flat experiment config; unknown keys are rejected.

    ``reflection_coefficient`` accepts a number or a complex literal string
    such as ``"0.1+0.2j"``.
    """

    model_config = ConfigDict(extra="forbid")

    carrier_frequency: float = _DEFAULTS.carrier_frequency
    tx_num_elements: int = _DEFAULTS.tx_num_elements
    tx_element_spacing: float | None = _DEFAULTS.tx_element_spacing
    tx_element_gain: float = _DEFAULTS.tx_element_gain
    rx_num_elements: int = _DEFAULTS.rx_num_elements
    rx_element_spacing: float | None = _DEFAULTS.rx_element_spacing
    rx_element_gain: float = _DEFAULTS.rx_element_gain
    distance: float = _DEFAULTS.distance
    scatterer_offset_axial: float | None = _DEFAULTS.scatterer_offset_axial
    scatterer_offset_lateral: float | None = _DEFAULTS.scatterer_offset_lateral
    reflection_coefficient: float | str = str(_DEFAULTS.reflection_coefficient)
    n_rf: int = _DEFAULTS.n_rf
    dof_threshold: float = _DEFAULTS.dof_threshold
    candidate_cap: int = _DEFAULTS.candidate_cap
    snr_points: list[float] = list(_DEFAULTS.snr_points)
    distance_points: list[float] = list(_DEFAULTS.distance_points)
    frequency_points: list[float] = list(_DEFAULTS.frequency_points)
    mc_samples: int = _DEFAULTS.mc_samples
    seed: int = _DEFAULTS.seed
    snr_mode: str = _DEFAULTS.snr_mode
    output_path: str = _DEFAULTS.output_path

    def to_config(self) -> ExperimentConfig:
        gamma = complex(str(self.reflection_coefficient).replace(" ", ""))
        return validate_config(
            ExperimentConfig(
                carrier_frequency=self.carrier_frequency,
                tx_num_elements=self.tx_num_elements,
                tx_element_spacing=self.tx_element_spacing,
                tx_element_gain=self.tx_element_gain,
                rx_num_elements=self.rx_num_elements,
                rx_element_spacing=self.rx_element_spacing,
                rx_element_gain=self.rx_element_gain,
                distance=self.distance,
                scatterer_offset_axial=self.scatterer_offset_axial,
                scatterer_offset_lateral=self.scatterer_offset_lateral,
                reflection_coefficient=gamma,
                n_rf=self.n_rf,
                dof_threshold=self.dof_threshold,
                candidate_cap=self.candidate_cap,
                snr_points=tuple(self.snr_points),
                distance_points=tuple(self.distance_points),
                frequency_points=tuple(self.frequency_points),
                mc_samples=self.mc_samples,
                seed=self.seed,
                snr_mode=self.snr_mode,
                output_path=self.output_path,
            )
        )


class HealthResponse(BaseModel):
    status: str
    version: str


class ActivationEntry(BaseModel):
    candidate_index: int
    subset: list[int]
    probability: float
    log2_det: float


class CapacityResponse(BaseModel):
    distance_m: float
    snr_db: float
    snr_mode: str
    dof: int
    k: int
    n_rf_eff: int
    truncated: bool
    c_bm_asymptotic: float
    c_bbs: float
    gap: float
    se_upper_bound_at_p: float
    fraunhofer_distance_m: float
    top_probabilities: list[ActivationEntry]


class DofResponse(BaseModel):
    distance_m: float
    carrier_frequency_hz: float
    wavelength_m: float
    tx_aperture_m: float
    rx_aperture_m: float
    fraunhofer_distance_m: float
    within_near_field: bool
    dof: int
    k: int
    leading_relative_amplitudes: list[float]


class SweepRowModel(BaseModel):
    frequency_hz: float | None = None
    distance_m: float | None = None
    snr_db: float | None = None
    dof: int
    k: int
    c_bm_asymptotic: float | None = None
    c_bbs: float | None = None
    gap: float | None = None
    se_mc_mean: float | None = None
    se_mc_stderr: float | None = None


class SweepResponse(BaseModel):
    kind: str
    row_count: int
    rows: list[SweepRowModel]
