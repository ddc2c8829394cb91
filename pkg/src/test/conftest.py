# src/test/conftest.py
"""
Shared fixtures: small analytic bases, synthetic states and simulators
"""
from dataclasses import dataclass

import numpy as np
import pytest
from hypothesis import settings as hypothesis_settings

from src.models.kernels import Grid1D
from src.models.schmidt import AzimuthalFamily, SchmidtBasis
from src.models.state import TwinBeamState
from src.schemas.config import CouplingSection, GridSection, SourceConfig
from src.services.observables.gram import build_state
from src.services.optics.dispersion import build_geometry, find_phasematching_angle
from src.services.schmidt.decomposition import analytic_gaussian_basis
from src.services.schmidt.triplets import assemble_triplets
from src.services.simulator import TwinBeamSimulator

hypothesis_settings.register_profile("simulator", deadline=None, derandomize=True, max_examples=50)
hypothesis_settings.load_profile("simulator")

SIGNAL_FREQUENCY = 2.7e15
SPECTRAL_SCALE = 2e12
RADIAL_SCALE = 1e4


def azimuthal_gaussian(width: float, order: int) -> AzimuthalFamily:
    """Normalized lambda_m ~ exp(-m^2 / (2 width^2)), m = 0..order"""
    m = np.arange(order + 1)
    multiplicity = np.where(m == 0, 1.0, 2.0)
    values = np.exp(-(m**2) / (2.0 * width**2))
    values /= np.sqrt(np.sum(multiplicity * values**2))
    return AzimuthalFamily(coefficients=values, multiplicity=multiplicity)


def single_azimuthal() -> AzimuthalFamily:
    return AzimuthalFamily(coefficients=np.array([1.0]), multiplicity=np.array([1.0]))


def gaussian_basis(
    spectral_mu: float = 0.5,
    radial_mu: float = 0.2,
    azimuthal: AzimuthalFamily | None = None,
    n_omega: int = 256,
    n_k: int = 128,
    spectral_count: int = 30,
) -> SchmidtBasis:
    """Double-Gaussian spectral and radial families on grids wide enough for every retained mode"""
    spectral_grid = Grid1D.from_half_span(SIGNAL_FREQUENCY, 16.0 * SPECTRAL_SCALE, n_omega)
    radial_grid = Grid1D.from_half_span(0.0, 12.0 * RADIAL_SCALE, n_k)
    return SchmidtBasis(
        spectral=analytic_gaussian_basis(spectral_mu, spectral_count, spectral_grid, scale=SPECTRAL_SCALE),
        radial=analytic_gaussian_basis(radial_mu, 12, radial_grid, scale=RADIAL_SCALE),
        azimuthal=azimuthal or azimuthal_gaussian(4.0, 16),
    )


@dataclass(frozen=True)
class LinearPhase:
    """Exit response with phi = gain * lambda"""
    gain: float

    def __call__(self, coefficients: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        phase = self.gain * np.asarray(coefficients, dtype=float)
        return np.cosh(phase), np.sinh(phase)


def weak_state(basis: SchmidtBasis, gain: float = 1e-3, truncation_mass: float = 1e-10) -> TwinBeamState:
    """Exit state with V = sinh(gain * lambda)"""
    table = assemble_triplets(basis.spectral, basis.radial, basis.azimuthal, xi=1.0, truncation_mass=truncation_mass)
    return build_state(table, basis, LinearPhase(gain), power=0.0)


@pytest.fixture
def basis() -> SchmidtBasis:
    return gaussian_basis()


@pytest.fixture
def small_config() -> SourceConfig:
    return SourceConfig(
        name="small",
        pump={"waist_m": 5e-5},
        grid=GridSection(n_omega=64, n_k=48),
        coupling=CouplingSection(constant=1e-7),
    )


@pytest.fixture
def synthetic_simulator(small_config: SourceConfig) -> TwinBeamSimulator:
    """Simulator over an analytic basis with the default crystal and geometry"""
    crystal = small_config.to_crystal()
    geometry = build_geometry(small_config.pump.wavelength_m, small_config.external_angle, crystal)
    crystal = small_config.to_crystal(find_phasematching_angle(geometry, crystal))
    basis = gaussian_basis(n_omega=128, n_k=64, spectral_count=20)
    return TwinBeamSimulator.from_basis(small_config, crystal, geometry, basis, coupling=1e-7)
