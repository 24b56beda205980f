"""Near-field two-ray channel construction from scene geometry.

Both arrays are uniform linear arrays lying in parallel planes separated by
the boresight distance; every path is modelled with its exact spherical-wave
length, so the model stays valid arbitrarily deep inside the near field.
The channel is the sum of the direct (LoS) component and a single first-order
reflection off a point scatterer placed between the arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0

# Paths shorter than this are treated as coincident geometry (meters).
_MIN_PATH = 1e-12


class GeometryError(ValueError):
    """Scene geometry that produces a degenerate propagation path."""


@dataclass(frozen=True)
class ArraySpec:
    """Uniform linear array: element count, spacing and per-element gain."""

    num_elements: int
    element_spacing: float
    element_gain: float = 1.0

    def __post_init__(self):
        if self.num_elements < 1:
            raise ValueError(f"num_elements must be >= 1, got {self.num_elements}")
        if self.element_spacing <= 0:
            raise ValueError(f"element_spacing must be > 0, got {self.element_spacing}")
        if self.element_gain <= 0:
            raise ValueError(f"element_gain must be > 0, got {self.element_gain}")

    @classmethod
    def half_wavelength(cls, num_elements, carrier_frequency, element_gain=1.0):
        """Array with element spacing of half a wavelength at ``carrier_frequency``."""
        lam = SPEED_OF_LIGHT / carrier_frequency
        return cls(num_elements, lam / 2.0, element_gain)

    @property
    def aperture(self):
        """End-to-end physical length, (N - 1) * spacing."""
        return (self.num_elements - 1) * self.element_spacing


@dataclass(frozen=True)
class SceneConfig:
    """Physical scenario for one transmitter/receiver placement.

    The transmit array sits in the plane x = 0, the receive array in the
    parallel plane x = ``distance``; elements run along y.  The scatterer is
    at ``(scatterer_offset_axial, scatterer_offset_lateral, 0)``.  Offsets
    left as ``None`` default to distance/2 (axial) and distance/4 (lateral),
    which keeps the reflection point between the arrays but off boresight.
    """

    carrier_frequency: float
    tx_array: ArraySpec
    rx_array: ArraySpec
    distance: float
    scatterer_offset_axial: float | None = None
    scatterer_offset_lateral: float | None = None
    reflection_coefficient: complex = 0.1 + 0.0j

    def __post_init__(self):
        if self.carrier_frequency <= 0:
            raise ValueError(f"carrier_frequency must be > 0, got {self.carrier_frequency}")
        if self.distance <= 0:
            raise ValueError(f"distance must be > 0, got {self.distance}")
        if self.scatterer_offset_axial is None:
            object.__setattr__(self, "scatterer_offset_axial", self.distance / 2.0)
        if self.scatterer_offset_lateral is None:
            object.__setattr__(self, "scatterer_offset_lateral", self.distance / 4.0)
        if not 0.0 < self.scatterer_offset_axial < self.distance:
            raise ValueError(
                "scatterer_offset_axial must lie strictly between the arrays "
                f"(0, {self.distance}), got {self.scatterer_offset_axial}"
            )
        gamma = complex(self.reflection_coefficient)
        object.__setattr__(self, "reflection_coefficient", gamma)
        if abs(gamma) > 1.0 + 1e-12:
            raise ValueError(f"|reflection_coefficient| must be <= 1, got {abs(gamma)}")

    @property
    def wavelength(self):
        return SPEED_OF_LIGHT / self.carrier_frequency

    @property
    def scatterer_position(self):
        return np.array(
            [self.scatterer_offset_axial, self.scatterer_offset_lateral, 0.0]
        )


@dataclass(frozen=True)
class ChannelMatrix:
    """Complex N_r x N_t channel with the scene that produced it."""

    entries: np.ndarray
    scene: SceneConfig = field(repr=False)

    def __post_init__(self):
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("channel entries must be finite")

    @property
    def shape(self):
        return self.entries.shape


def antenna_positions(array: ArraySpec, plane_offset: float) -> np.ndarray:
    """3-D element coordinates of a ULA centered on the boresight axis.

    Returns an (N, 3) array of points (plane_offset, y_k, 0) with y_k spaced
    ``element_spacing`` apart and symmetric about y = 0.
    """
    n = array.num_elements
    lateral = (np.arange(n) - (n - 1) / 2.0) * array.element_spacing
    pos = np.zeros((n, 3))
    pos[:, 0] = plane_offset
    pos[:, 1] = lateral
    return pos


def _spherical_entries(path_lengths, wavelength, gain):
    """Per-path complex entries gain * lambda / (4 pi r) * exp(-j 2 pi r / lambda)."""
    amp = gain * wavelength / (4.0 * np.pi * path_lengths)
    return amp * np.exp(-2j * np.pi * path_lengths / wavelength)


def los_channel(scene: SceneConfig) -> ChannelMatrix:
    """Direct-path component: entry (n_r, n_t) has the exact element-to-element
    distance in both its amplitude and its phase."""
    tx = antenna_positions(scene.tx_array, 0.0)
    rx = antenna_positions(scene.rx_array, scene.distance)
    r = np.linalg.norm(rx[:, None, :] - tx[None, :, :], axis=2)
    if np.any(r < _MIN_PATH):
        raise GeometryError("coincident transmit/receive elements (zero path length)")
    gain = np.sqrt(scene.tx_array.element_gain * scene.rx_array.element_gain)
    return ChannelMatrix(_spherical_entries(r, scene.wavelength, gain), scene)


def nlos_channel(scene: SceneConfig) -> ChannelMatrix:
    """Single-bounce component through the point scatterer; the path length is
    the tx-element -> scatterer -> rx-element sum."""
    tx = antenna_positions(scene.tx_array, 0.0)
    rx = antenna_positions(scene.rx_array, scene.distance)
    s = scene.scatterer_position
    r_ts = np.linalg.norm(tx - s, axis=1)
    r_sr = np.linalg.norm(rx - s, axis=1)
    if np.any(r_ts < _MIN_PATH) or np.any(r_sr < _MIN_PATH):
        raise GeometryError("scatterer coincides with an array element")
    r = r_sr[:, None] + r_ts[None, :]
    gain = scene.reflection_coefficient * np.sqrt(
        scene.tx_array.element_gain * scene.rx_array.element_gain
    )
    return ChannelMatrix(_spherical_entries(r, scene.wavelength, gain), scene)


def two_ray_channel(scene: SceneConfig) -> ChannelMatrix:
    """Full channel: elementwise sum of the LoS and NLoS components."""
    h_los = los_channel(scene)
    h_nlos = nlos_channel(scene)
    return ChannelMatrix(h_los.entries + h_nlos.entries, scene)


def fraunhofer_distance(aperture: float, wavelength: float) -> float:
    """Near-field/far-field boundary 2 D^2 / lambda for aperture D."""
    if aperture <= 0:
        raise ValueError(f"aperture must be > 0, got {aperture}")
    if wavelength <= 0:
        raise ValueError(f"wavelength must be > 0, got {wavelength}")
    return 2.0 * aperture**2 / wavelength


def scene_fraunhofer_distance(scene: SceneConfig) -> float:
    """Fraunhofer distance of the scene, using the larger of the two apertures."""
    aperture = max(scene.tx_array.aperture, scene.rx_array.aperture)
    if aperture <= 0:  # both arrays single-element: no extended aperture
        return 0.0
    return fraunhofer_distance(aperture, scene.wavelength)


def frobenius_normalized(entries: np.ndarray) -> np.ndarray:
    """Rescale so that ||H||_F^2 = N_t * N_r (unit average element power).

    Decouples the SNR axis from absolute path loss; used by the
    ``normalized`` SNR mode.
    """
    norm = np.linalg.norm(entries)
    if norm == 0:
        raise ValueError("cannot normalize an all-zero channel")
    n_r, n_t = entries.shape
    return entries * (np.sqrt(n_t * n_r) / norm)
