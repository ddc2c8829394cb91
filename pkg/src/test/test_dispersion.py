# src/test/test_dispersion.py
"""
Refractive indices, emission geometry and phase matching
"""
from dataclasses import replace

import numpy as np
import pytest

from src.core.constants import SPEED_OF_LIGHT, Polarization
from src.core.exception import ConfigurationError, DomainError
from src.schemas.config import SourceConfig
from src.services.optics.dispersion import (
    build_geometry,
    find_phasematching_angle,
    phase_mismatch_z,
    refractive_index,
    wave_number,
)


@pytest.fixture
def crystal():
    return SourceConfig().to_crystal()


@pytest.fixture
def geometry(crystal):
    config = SourceConfig()
    return build_geometry(config.pump.wavelength_m, config.external_angle, crystal)


def test_ordinary_index_at_signal_wavelength(crystal):
    assert refractive_index(Polarization.ORDINARY, 698e-9, crystal) == pytest.approx(1.66498, abs=1e-4)


def test_extraordinary_index_along_axis_equals_ordinary(crystal):
    n_o = refractive_index(Polarization.ORDINARY, 349e-9, crystal)
    n_e = refractive_index(Polarization.EXTRAORDINARY, 349e-9, crystal, angle=0.0)
    assert n_e == pytest.approx(n_o, rel=1e-12)


def test_extraordinary_index_decreases_with_angle(crystal):
    angles = np.deg2rad([0.0, 20.0, 40.0, 60.0])
    indices = [refractive_index(Polarization.EXTRAORDINARY, 349e-9, crystal, a) for a in angles]
    assert np.all(np.diff(indices) < 0)


def test_wavelength_outside_band_rejected(crystal):
    with pytest.raises(DomainError):
        refractive_index(Polarization.ORDINARY, 2e-6, crystal)


def test_wave_number_matches_index(crystal):
    omega = 2.0 * np.pi * SPEED_OF_LIGHT / 698e-9
    n = refractive_index(Polarization.ORDINARY, 698e-9, crystal)
    assert wave_number(Polarization.ORDINARY, omega, crystal) == pytest.approx(n * omega / SPEED_OF_LIGHT, rel=1e-12)


def test_ring_radius_follows_external_angle(geometry):
    expected = geometry.signal_frequency / SPEED_OF_LIGHT * np.sin(geometry.external_angle)
    assert geometry.ring_radius == pytest.approx(expected, rel=1e-10)
    assert geometry.idler_frequency == pytest.approx(geometry.signal_frequency, rel=1e-15)


def test_phasematching_angle_zeroes_mismatch(crystal, geometry):
    theta = find_phasematching_angle(geometry, crystal)
    assert np.rad2deg(theta) == pytest.approx(36.5, abs=0.5)

    mismatch = phase_mismatch_z(
        geometry.signal_frequency, geometry.idler_frequency, (0.0, 0.0), geometry, crystal, cut_angle=theta
    )
    k_pump = wave_number(Polarization.EXTRAORDINARY, geometry.pump_frequency, crystal, theta)
    assert abs(mismatch) < 1e-6 * k_pump


def test_non_collinear_angle_exceeds_collinear(crystal):
    config = SourceConfig()
    collinear = build_geometry(config.pump.wavelength_m, 1e-9, crystal)
    ring = build_geometry(config.pump.wavelength_m, config.external_angle, crystal)
    assert find_phasematching_angle(ring, crystal) > find_phasematching_angle(collinear, crystal)


def test_isotropic_crystal_has_no_phasematching_angle(crystal, geometry):
    isotropic = replace(crystal, extraordinary=crystal.ordinary)
    with pytest.raises(ConfigurationError):
        find_phasematching_angle(geometry, isotropic)


def test_evanescent_offset_rejected(crystal, geometry):
    with pytest.raises(DomainError):
        phase_mismatch_z(geometry.signal_frequency, geometry.idler_frequency, (1e8, 0.0), geometry, crystal)


def test_mismatch_symmetric_in_signal_and_idler(crystal, geometry):
    detuning = 1e12
    a = phase_mismatch_z(
        geometry.signal_frequency + detuning, geometry.idler_frequency - 2 * detuning, (1e3, -2e3), geometry, crystal
    )
    b = phase_mismatch_z(
        geometry.idler_frequency - 2 * detuning, geometry.signal_frequency + detuning, (-2e3, 1e3), geometry, crystal
    )
    assert a == pytest.approx(b, rel=1e-10, abs=1e-6)
