# src/models/state.py
"""
Twin-beam state at the crystal exit and sampled observables
"""
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from src.models.schmidt import SchmidtBasis, TripletTable

# Exit (U, V) per triplet coefficient
Response = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class ModeReductions:
    """
    Power-dependent sums over the retained triplets.

    Gram matrices are indexed by family mode; each sums mult * W W^T over
    the other two triplet indices, with W = V^2 (auto) or U V (cross).
    The azimuthal profile is sampled at `azimuthal_angles`.
    """
    photon_number: float
    gain_sum: float
    gain_square_sum: float
    spectral_populations: np.ndarray
    radial_populations: np.ndarray
    spectral_auto_gram: np.ndarray
    spectral_cross_gram: np.ndarray
    radial_cross_gram: np.ndarray
    azimuthal_angles: np.ndarray
    azimuthal_profile: np.ndarray


@dataclass(frozen=True)
class TwinBeamState:
    """Triplet table joined with the exit reductions at one pump power"""
    table: TripletTable
    basis: SchmidtBasis
    reductions: ModeReductions
    power: float
    ring_radius: float = 0.0
    response: Response | None = field(default=None, repr=False, compare=False)

@dataclass(frozen=True)
class Profile1D:
    axis: np.ndarray
    values: np.ndarray
    unit: str = ""
    label: str = ""

    @property
    def step(self) -> float:
        return float(self.axis[1] - self.axis[0])

    def integral(self) -> float:
        """Rectangle-rule integral on the uniform axis"""
        return float(np.sum(self.values) * self.step)

    def normalized(self) -> "Profile1D":
        peak = float(np.max(self.values))
        return Profile1D(self.axis, self.values / peak if peak > 0 else self.values, self.unit, self.label)


@dataclass(frozen=True)
class Profile2D:
    axis_x: np.ndarray
    axis_y: np.ndarray
    values: np.ndarray
    unit: str = ""
    label: str = ""

    def slice_at(self, index: int) -> Profile1D:
        """Profile along x at fixed y = axis_y[index]"""
        return Profile1D(self.axis_x, self.values[:, index], self.unit, self.label)


@dataclass(frozen=True)
class WidthReport:
    """FWHM of a 1D profile with interpolation metadata"""
    width: float
    left: float
    right: float
    bracket: tuple[int, int]
    multimodal: bool = False
    truncated: bool = False
    unit: str = ""


@dataclass(frozen=True)
class Dimensionality:
    """Entanglement dimensionality; `fallback` marks the weak-limit Schmidt number"""
    value: float
    fallback: bool = False


@dataclass(frozen=True)
class PopulationHistogram:
    """
    Triplet count per log-lambda bin and n_s,lambda, the exit V^2 at the
    mean coefficient of every occupied bin
    """
    bin_edges: np.ndarray
    counts: np.ndarray
    coefficients: np.ndarray
    photon_numbers: np.ndarray
