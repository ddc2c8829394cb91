# src/models/sweep.py
"""
Power sweep plan
"""
from dataclasses import dataclass

import numpy as np

from src.core.constants import ThresholdObservable
from src.core.exception import ConfigurationError


@dataclass(frozen=True)
class SweepPlan:
    """
    Pump powers (W) to evaluate, in ascending order.

    With `use_extended_length` the dynamics propagate over the
    crystal's extended length while the modes stay those of its
    physical length.
    """
    powers: np.ndarray
    use_extended_length: bool = False
    threshold_observable: ThresholdObservable = ThresholdObservable.CROSS_WIDTH_MAXIMA

    def __post_init__(self):
        powers = np.asarray(self.powers, dtype=float)
        if powers.ndim != 1 or powers.size < 2:
            raise ConfigurationError("Sweep needs at least two powers", details={"points": int(powers.size)})
        if np.any(np.diff(powers) <= 0) or np.any(powers < 0):
            raise ConfigurationError("Sweep powers must be non-negative and strictly increasing")
        object.__setattr__(self, "powers", powers)
