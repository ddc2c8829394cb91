# src/test/test_dynamics.py
"""
Closed-form triplet dynamics in the generalized parametric approximation
"""
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.core.constants import VACUUM_AMPLITUDE
from src.core.exception import DomainError
from src.models.dynamics import TripletInit
from src.services.dynamics.triplet import (
    ExitResponse,
    classical_amplitudes,
    depletion_length,
    exit_coefficients,
    phase_integral,
    solve_coefficients,
)
from src.services.schmidt.triplets import assemble_triplets, leading_triplets

from src.test.conftest import gaussian_basis


@pytest.fixture
def example():
    return TripletInit(pump_amplitude=10.0, coupling=0.1, z_end=0.0)


def test_worked_example_constants(example):
    assert example.total_amplitude == pytest.approx(10.02497, rel=1e-6)
    z0 = depletion_length(example)
    assert z0 == pytest.approx(3.2647, rel=1e-4)
    assert phase_integral(example, z0) == pytest.approx(np.log(np.sqrt(2.0) * 10.0), rel=1e-10)

    solution = exit_coefficients(TripletInit(pump_amplitude=10.0, coupling=0.1, z_end=z0))
    assert solution.photon_numbers == pytest.approx(49.50, rel=1e-3)
    assert solution.pump_exit == pytest.approx(VACUUM_AMPLITUDE, rel=1e-8)
    assert solution.signal_exit == pytest.approx(10.0, rel=1e-10)


def test_phase_tracks_signal_amplitude_on_first_half_period(example):
    z = np.linspace(0.0, depletion_length(example), 41)
    _, signal = classical_amplitudes(example, z)
    np.testing.assert_allclose(phase_integral(example, z), np.log(np.sqrt(2.0) * signal), atol=1e-10)


def test_energy_is_conserved(example):
    z = np.linspace(0.0, 4.0 * depletion_length(example), 97)
    pump, signal = classical_amplitudes(example, z)
    np.testing.assert_allclose(pump**2 + signal**2, example.total_amplitude**2, rtol=1e-12)


def test_vacuum_return_and_periodicity(example):
    z0 = depletion_length(example)
    pump, signal = classical_amplitudes(example, 2.0 * z0)
    assert pump == pytest.approx(10.0, rel=1e-8)
    assert signal == pytest.approx(VACUUM_AMPLITUDE, rel=1e-8)
    assert phase_integral(example, 2.0 * z0) == pytest.approx(0.0, abs=1e-8)

    z = np.linspace(0.0, 2.0 * z0, 17)
    np.testing.assert_allclose(phase_integral(example, z + 2.0 * z0), phase_integral(example, z), atol=1e-9)
    np.testing.assert_allclose(phase_integral(example, 2.0 * z0 - z), phase_integral(example, z), atol=1e-9)


def test_photon_number_grows_until_depletion(example):
    z = np.linspace(0.0, depletion_length(example), 50)
    assert np.all(np.diff(phase_integral(example, z)) > 0)


def test_pump_at_vacuum_level_has_no_depletion_length():
    init = TripletInit(pump_amplitude=VACUUM_AMPLITUDE, coupling=0.5, z_end=2.0)
    assert depletion_length(init) == 0.0
    solution = exit_coefficients(init)
    assert np.isfinite(solution.phase)
    assert solution.u**2 - solution.v**2 == pytest.approx(1.0, rel=1e-12)


def test_seed_from_photon_amplitude():
    init = TripletInit.from_photon_amplitude(np.array([0.0, 3.0]), coupling=1.0, z_end=0.0)
    np.testing.assert_allclose(init.pump_amplitude, [VACUUM_AMPLITUDE, np.sqrt(9.5)])


def test_large_amplitudes_stay_finite():
    init = TripletInit(pump_amplitude=1e8, coupling=1.0, z_end=0.0)
    z0 = depletion_length(init)
    solution = exit_coefficients(TripletInit(pump_amplitude=1e8, coupling=1.0, z_end=0.5 * z0))
    assert np.isfinite(solution.phase)
    assert phase_integral(init, z0) == pytest.approx(np.log(np.sqrt(2.0) * 1e8), rel=1e-10)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"pump_amplitude": 10.0, "coupling": 0.0, "z_end": 1.0},
        {"pump_amplitude": 10.0, "coupling": 0.1, "z_end": -1.0},
        {"pump_amplitude": 0.1, "coupling": 0.1, "z_end": 1.0},
    ],
)
def test_invalid_inits_rejected(kwargs):
    with pytest.raises(DomainError):
        TripletInit(**kwargs)


@given(
    pump=st.floats(min_value=1.0, max_value=1e4),
    coupling=st.floats(min_value=1e-3, max_value=1.0),
    z=st.floats(min_value=0.0, max_value=50.0),
)
def test_bogoliubov_coefficients_are_symplectic(pump, coupling, z):
    solution = exit_coefficients(TripletInit(pump_amplitude=pump, coupling=coupling, z_end=z))
    assert abs(solution.u**2 - solution.v**2 - 1.0) <= 1e-10 * solution.u**2
    assert solution.phase >= -1e-12


def test_table_solution_is_vectorized():
    basis = gaussian_basis(n_omega=64, n_k=32)
    table = assemble_triplets(basis.spectral, basis.radial, basis.azimuthal, xi=100.0, truncation_mass=1e-3)
    coefficients = leading_triplets(table).coefficients
    solution = solve_coefficients(coefficients, table.xi, coupling=0.01, z_end=1.0)

    assert solution.v.shape == coefficients.shape
    # Stronger triplets gain at least as much
    assert np.all(np.diff(solution.photon_numbers) <= 1e-12)

    single = exit_coefficients(TripletInit.from_photon_amplitude(100.0 * coefficients[0], 0.01, 1.0))
    assert solution.v[0] == pytest.approx(single.v, rel=1e-12)

    u, v = ExitResponse(xi=100.0, coupling=0.01, z_end=1.0)(coefficients)
    np.testing.assert_array_equal(v, solution.v)
    np.testing.assert_allclose(u**2 - v**2, 1.0, rtol=1e-9)
