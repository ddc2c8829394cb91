# src/models/optics.py
"""
Crystal and emission geometry
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SellmeierCoefficients:
    """n^2 = A + B/(lambda^2 - C) - D*lambda^2 with lambda in micrometres"""
    a: float
    b: float
    c: float
    d: float

    def index_squared(self, wavelength_um: np.ndarray | float) -> np.ndarray:
        lam2 = np.square(wavelength_um)
        return self.a + self.b / (lam2 - self.c) - self.d * lam2


@dataclass(frozen=True)
class CrystalConfig:
    """Uniaxial crystal cut for type-I (eoo) interaction"""
    length: float
    cut_angle: float
    ordinary: SellmeierCoefficients
    extraordinary: SellmeierCoefficients
    extended_length: float | None = None

    @property
    def interaction_length(self) -> float:
        """Length the triplet dynamics propagate over"""
        return self.extended_length if self.extended_length is not None else self.length


@dataclass(frozen=True)
class Geometry:
    """Degenerate non-collinear emission on a thin ring"""
    pump_frequency: float
    signal_frequency: float
    external_angle: float
    internal_angle: float
    ring_radius: float

    @property
    def idler_frequency(self) -> float:
        return self.pump_frequency - self.signal_frequency
