"""Near-field XL-MIMO beamspace-modulation capacity simulator."""

__version__ = "0.1.0"

from .beamspace import (
    BeamspaceDecomposition,
    CandidateSet,
    beamformer,
    decompose,
    dof_versus_distance,
    enumerate_candidates,
)
from .capacity import (
    ActivationDistribution,
    CandidateStats,
    CapacityReport,
    SnrSpec,
    activation_probabilities,
    asymptotic_capacity,
    bbs_capacity,
    candidate_log2det,
    candidate_stats,
    capacity_report,
    se_upper_bound,
)
from .channel import (
    SPEED_OF_LIGHT,
    ArraySpec,
    ChannelMatrix,
    SceneConfig,
    antenna_positions,
    fraunhofer_distance,
    frobenius_normalized,
    los_channel,
    nlos_channel,
    scene_fraunhofer_distance,
    two_ray_channel,
)
from .experiments import (
    ConfigError,
    ExperimentConfig,
    SweepRow,
    apply_overrides,
    base_config,
    distance_sweep_config,
    dof_sweep_config,
    load_config,
    parse_config,
    point_analysis,
    read_csv,
    rows_to_csv,
    run_distance_sweep,
    run_dof_sweep,
    run_snr_sweep,
    scene_for,
    snr_sweep_config,
    write_csv,
)
from .montecarlo import (
    MixtureModel,
    SeEstimate,
    build_mixture,
    estimate_se,
    log2_mixture_density,
    sample_component,
)
