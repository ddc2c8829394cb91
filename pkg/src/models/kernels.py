# src/models/kernels.py
"""
Pump pulse and discretized two-photon kernels
"""
from dataclasses import dataclass, replace

import numpy as np

from src.core.constants import AZIMUTHAL_PAIR_MULTIPLICITY, SPEED_OF_LIGHT


@dataclass(frozen=True)
class PumpConfig:
    """Chirped Gaussian pump pulse"""
    wavelength: float
    power: float
    repetition_rate: float
    waist: float
    spectral_fwhm: float
    chirp: float = 0.0
    fixed_duration: float | None = None

    @property
    def central_frequency(self) -> float:
        return 2.0 * np.pi * SPEED_OF_LIGHT / self.wavelength

    @property
    def spectral_fwhm_frequency(self) -> float:
        """Configured intensity FWHM converted to rad/s"""
        return 2.0 * np.pi * SPEED_OF_LIGHT * self.spectral_fwhm / self.wavelength**2

    @property
    def duration(self) -> float:
        """
        Pulse duration tau_p.

        Chosen so the realized spectral intensity FWHM equals
        `spectral_fwhm` whatever the chirp, unless pinned by
        `fixed_duration`.
        """
        if self.fixed_duration is not None:
            return self.fixed_duration
        return 2.0 * np.sqrt(2.0 * np.log(2.0) * (1.0 + self.chirp**2)) / self.spectral_fwhm_frequency

    def with_power(self, power: float) -> "PumpConfig":
        return replace(self, power=power)


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid whose index size//2 sits exactly on `center`"""
    center: float
    step: float
    size: int

    @property
    def axis(self) -> np.ndarray:
        return self.center + (np.arange(self.size) - self.size // 2) * self.step

    @property
    def center_index(self) -> int:
        return self.size // 2

    @property
    def half_span(self) -> float:
        return self.step * (self.size // 2)

    @classmethod
    def from_half_span(cls, center: float, half_span: float, size: int) -> "Grid1D":
        return cls(center=center, step=half_span / (size // 2), size=size)


@dataclass(frozen=True)
class Kernel2D:
    """Kernel sampled on grid x grid (signal variable first)"""
    grid: Grid1D
    values: np.ndarray
    span_doublings: int = 0
    # Boundary maximum of |values| over the peak
    edge_ratio: float = 0.0

    @property
    def peak(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class AzimuthalCoefficients:
    """
    Fourier coefficients c_m of the angular correlation kernel.

    Stored for m = 0..order; c_{-m} = c_m.
    """
    coefficients: np.ndarray
    order: int

    @property
    def multiplicity(self) -> np.ndarray:
        mult = np.full(self.coefficients.shape, AZIMUTHAL_PAIR_MULTIPLICITY, dtype=float)
        mult[0] = 1.0
        return mult

    def symmetric(self) -> np.ndarray:
        """Coefficients for m = -order..order"""
        return np.concatenate([self.coefficients[:0:-1], self.coefficients])

    def effective_modes(self) -> float:
        full = self.symmetric()
        return float(full.sum() ** 2 / np.sum(full**2))


@dataclass(frozen=True)
class KernelSet:
    spectral: Kernel2D
    radial: Kernel2D
    azimuthal: AzimuthalCoefficients


@dataclass(frozen=True)
class GridSpec:
    """Sampling controls for kernel construction"""
    n_omega: int = 512
    n_k: int = 256
    max_azimuthal_order: int = 4096
    edge_tolerance: float = 1e-4
    max_span_doublings: int = 12
