import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nfbm import ArraySpec, SceneConfig


@pytest.fixture
def small_scene():
    """4x4 arrays at 30 GHz, desk-scale separation, default scatterer."""
    return SceneConfig(
        carrier_frequency=30e9,
        tx_array=ArraySpec.half_wavelength(4, 30e9),
        rx_array=ArraySpec.half_wavelength(4, 30e9),
        distance=0.5,
        reflection_coefficient=0.5 + 0.0j,
    )


@pytest.fixture
def two_by_two_scene():
    return SceneConfig(
        carrier_frequency=28e9,
        tx_array=ArraySpec(2, 0.004),
        rx_array=ArraySpec(2, 0.006),
        distance=0.8,
        scatterer_offset_axial=0.3,
        scatterer_offset_lateral=0.15,
        reflection_coefficient=0.4 - 0.2j,
    )
