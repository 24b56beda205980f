"""Channel SVD, effective spatial degrees of freedom, beamformer candidates.

The effective DoF count is the number of singular values within a relative
amplitude threshold of the strongest one; near-field spectra decay
continuously, so a plain rank() is numerically meaningless here.  Beamformer
candidates are all size-n_rf subsets of the retained right singular vectors,
with the best-beamspace subset {0, .., n_rf-1} always first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from math import comb

import numpy as np

from .channel import ChannelMatrix, SceneConfig, two_ray_channel

DEFAULT_DOF_THRESHOLD = 0.01  # relative amplitude, i.e. -40 dB in power
DEFAULT_CANDIDATE_CAP = 4096


@dataclass(frozen=True)
class BeamspaceDecomposition:
    """SVD of the channel plus the effective-DoF count.

    ``left_vectors`` / ``right_vectors`` hold the singular vectors as columns,
    ordered by descending singular value.
    """

    singular_values: np.ndarray
    left_vectors: np.ndarray = field(repr=False)
    right_vectors: np.ndarray = field(repr=False)
    dof: int
    dof_threshold: float


@dataclass(frozen=True)
class CandidateSet:
    """The K index subsets of retained singular vectors usable as beamformers."""

    subsets: tuple[tuple[int, ...], ...]
    n_rf: int
    n_rf_eff: int
    truncation_flag: bool

    def __len__(self):
        return len(self.subsets)


def _count_dof(singular_values, threshold):
    s0 = singular_values[0]
    if s0 <= 0:
        raise ValueError("channel has no nonzero singular value")
    return int(np.count_nonzero(singular_values >= threshold * s0))


def decompose(channel, threshold=DEFAULT_DOF_THRESHOLD) -> BeamspaceDecomposition:
    """Full SVD of the channel with singular values in descending order.

    ``channel`` may be a ChannelMatrix or a plain complex matrix.  The DoF is
    the number of singular values >= threshold * sigma_1.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"dof threshold must be in (0, 1), got {threshold}")
    entries = channel.entries if isinstance(channel, ChannelMatrix) else np.asarray(channel)
    if entries.ndim != 2:
        raise ValueError("channel must be a 2-D matrix")
    if not np.any(entries):
        raise ValueError("cannot decompose an all-zero channel")
    u, s, vh = np.linalg.svd(entries, full_matrices=False)
    return BeamspaceDecomposition(
        singular_values=s,
        left_vectors=u,
        right_vectors=vh.conj().T,
        dof=_count_dof(s, threshold),
        dof_threshold=threshold,
    )


def dof_versus_distance(scene: SceneConfig, distances, threshold=DEFAULT_DOF_THRESHOLD):
    """Effective DoF at each distance, rebuilding the scene per point.

    The scatterer offsets keep their proportion to the template's distance,
    so the reflection geometry scales with the sweep point.
    """
    distances = list(distances)
    if any(d <= 0 for d in distances):
        raise ValueError("distances must be positive")
    axial_frac = scene.scatterer_offset_axial / scene.distance
    lateral_frac = scene.scatterer_offset_lateral / scene.distance
    out = []
    for d in distances:
        point_scene = replace(
            scene,
            distance=d,
            scatterer_offset_axial=axial_frac * d,
            scatterer_offset_lateral=lateral_frac * d,
        )
        decomp = decompose(two_ray_channel(point_scene), threshold)
        out.append((d, decomp.dof))
    return out


def enumerate_candidates(
    decomp: BeamspaceDecomposition, n_rf: int, cap: int = DEFAULT_CANDIDATE_CAP
) -> CandidateSet:
    """All size-min(n_rf, dof) subsets of the retained singular-vector indices.

    Lexicographic order puts the best beamspace {0, .., n_rf_eff - 1} first.
    When comb(dof, n_rf_eff) exceeds ``cap``, candidates are restricted to the
    strongest m vectors with the largest m such that comb(m, n_rf_eff) <= cap.
    """
    if n_rf < 1:
        raise ValueError(f"n_rf must be >= 1, got {n_rf}")
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    n_rf_eff = min(n_rf, decomp.dof)
    m = decomp.dof
    truncated = False
    if comb(m, n_rf_eff) > cap:
        while comb(m, n_rf_eff) > cap:
            m -= 1
        truncated = True
    subsets = tuple(itertools.combinations(range(m), n_rf_eff))
    return CandidateSet(subsets=subsets, n_rf=n_rf, n_rf_eff=n_rf_eff, truncation_flag=truncated)


def beamformer(decomp: BeamspaceDecomposition, subset) -> np.ndarray:
    """N_t x |subset| matrix whose columns are the selected right singular vectors."""
    idx = list(subset)
    if any(j < 0 or j >= decomp.singular_values.size for j in idx):
        raise IndexError(f"beamformer subset {subset} out of range")
    return decomp.right_vectors[:, idx]
