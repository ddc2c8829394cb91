# src/models/oracles.py
"""
Oracle configurations and trajectories
"""
from dataclasses import dataclass

import numpy as np

from src.core.config import settings
from src.core.exception import ConfigurationError, CutoffError


@dataclass(frozen=True)
class Trajectory:
    """
    Sampled amplitudes (A_p, A_s) and Bogoliubov coefficients (U, V).

    Arrays are (rows, samples) for batched runs, (samples,) otherwise.
    """
    z: np.ndarray
    pump: np.ndarray
    signal: np.ndarray
    u: np.ndarray
    v: np.ndarray
    steps: int


@dataclass(frozen=True)
class FockConfig:
    """Coherent pump of amplitude `alpha` into signal/idler vacuum"""
    alpha: float
    cutoff: int
    coupling: float
    z_grid: np.ndarray

    def __post_init__(self):
        if self.cutoff > settings.FOCK_MAX_CUTOFF:
            raise ConfigurationError(
                "Fock cutoff above the memory bound",
                details={"cutoff": self.cutoff, "max": settings.FOCK_MAX_CUTOFF},
            )
        if self.alpha < 0 or self.coupling <= 0:
            raise ConfigurationError(
                "Fock oracle needs alpha >= 0 and a positive coupling",
                details={"alpha": self.alpha, "coupling": self.coupling},
            )
        if self.alpha**2 + 5.0 * self.alpha > self.cutoff:
            raise CutoffError(
                "Fock cutoff too small for the coherent pump",
                details={"alpha": self.alpha, "cutoff": self.cutoff},
            )
        z = np.asarray(self.z_grid, dtype=float)
        if z.ndim != 1 or z.size < 2 or z[0] != 0.0 or np.any(np.diff(z) <= 0):
            raise ConfigurationError("Fock z grid must start at 0 and increase")
        object.__setattr__(self, "z_grid", z)


@dataclass(frozen=True)
class FockTrajectory:
    """Exact expectations; signal and idler numbers coincide by symmetry"""
    z: np.ndarray
    pump_number: np.ndarray
    signal_number: np.ndarray
    idler_number: np.ndarray
    pump_variance: np.ndarray
    signal_variance: np.ndarray
    norm: np.ndarray


@dataclass(frozen=True)
class OracleArtifacts:
    """Trajectories written by the oracle run"""
    classical: Trajectory
    fock: FockTrajectory
    approximate_signal_number: np.ndarray
