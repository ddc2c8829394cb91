# src/models/dynamics.py
"""
Triplet initial conditions and exit solutions.

Fields may be scalars or numpy arrays of equal shape, so a whole
triplet table is handled as one vectorized init.
"""
from dataclasses import dataclass

import numpy as np

from src.core.constants import VACUUM_AMPLITUDE
from src.core.exception import DomainError


@dataclass(frozen=True)
class TripletInit:
    """Symmetric-ordering amplitudes at the crystal entrance"""
    pump_amplitude: np.ndarray | float
    coupling: float
    z_end: float
    signal_amplitude: np.ndarray | float = VACUUM_AMPLITUDE

    def __post_init__(self):
        if self.coupling <= 0:
            raise DomainError("Coupling constant must be positive", details={"coupling": self.coupling})
        if self.z_end < 0:
            raise DomainError("Propagation length must be non-negative", details={"z_end": self.z_end})
        if np.any(np.asarray(self.pump_amplitude) < np.asarray(self.signal_amplitude)):
            raise DomainError("Pump amplitude below the signal seed amplitude")

    @classmethod
    def from_photon_amplitude(
        cls,
        amplitude: np.ndarray | float,
        coupling: float,
        z_end: float,
    ) -> "TripletInit":
        """Seed A_p(0) = sqrt(A_N^2 + 1/2) from the coherent amplitude A_N"""
        amplitude = np.asarray(amplitude, dtype=float)
        return cls(
            pump_amplitude=np.sqrt(amplitude**2 + VACUUM_AMPLITUDE**2),
            coupling=coupling,
            z_end=z_end,
        )

    @property
    def total_amplitude(self) -> np.ndarray | float:
        """A_ps = sqrt(A_p(0)^2 + A_s(0)^2), conserved along z"""
        return np.sqrt(np.square(self.pump_amplitude) + np.square(self.signal_amplitude))

    @property
    def depletion_gap(self) -> np.ndarray | float:
        """A_ps - A_p(0) without cancellation"""
        return np.square(self.signal_amplitude) / (self.total_amplitude + self.pump_amplitude)


@dataclass(frozen=True)
class TripletSolution:
    """Per-triplet exit state; V^2 is the mean signal photon number"""
    depletion_length: np.ndarray | float
    phase: np.ndarray | float
    u: np.ndarray | float
    v: np.ndarray | float
    pump_exit: np.ndarray | float
    signal_exit: np.ndarray | float

    @property
    def photon_numbers(self) -> np.ndarray | float:
        return np.square(self.v)
