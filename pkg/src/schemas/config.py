# src/schemas/config.py
"""
Scenario file schema (YAML), validated with pydantic
"""
from pathlib import Path
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.config import settings
from src.core.constants import (
    BBO_EXTRAORDINARY,
    BBO_ORDINARY,
    DEFAULT_CALIBRATION_CONVERSION,
    DEFAULT_CALIBRATION_POWER_W,
    DEFAULT_CRYSTAL_LENGTH_M,
    DEFAULT_EXTERNAL_ANGLE_DEG,
    DEFAULT_POWER_MAX_W,
    DEFAULT_POWER_MIN_W,
    DEFAULT_POWER_POINTS,
    DEFAULT_PUMP_FWHM_M,
    DEFAULT_PUMP_WAIST_M,
    DEFAULT_PUMP_WAVELENGTH_M,
    DEFAULT_REPETITION_RATE_HZ,
    ThresholdObservable,
)
from src.models.kernels import GridSpec, PumpConfig
from src.models.optics import CrystalConfig, SellmeierCoefficients


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class CrystalSection(_Section):
    """BBO crystal; the cut angle is solved from phase matching when omitted"""
    length_m: float = Field(default=DEFAULT_CRYSTAL_LENGTH_M, gt=0.0)
    extended_length_m: Optional[float] = Field(default=None, gt=0.0)
    cut_angle_deg: Optional[float] = Field(default=None, gt=0.0, lt=90.0)
    ordinary: tuple[float, float, float, float] = BBO_ORDINARY
    extraordinary: tuple[float, float, float, float] = BBO_EXTRAORDINARY

    @model_validator(mode="after")
    def check_extended_length(self) -> "CrystalSection":
        if self.extended_length_m is not None and self.extended_length_m < self.length_m:
            raise ValueError("extended_length_m must not be shorter than length_m")
        return self


class PumpSection(_Section):
    wavelength_m: float = Field(default=DEFAULT_PUMP_WAVELENGTH_M, gt=0.0)
    repetition_rate_hz: float = Field(default=DEFAULT_REPETITION_RATE_HZ, gt=0.0)
    waist_m: float = Field(default=DEFAULT_PUMP_WAIST_M, gt=0.0)
    spectral_fwhm_m: float = Field(default=DEFAULT_PUMP_FWHM_M, gt=0.0)
    chirp: float = 0.0
    fixed_duration_s: Optional[float] = Field(default=None, gt=0.0)


class GeometrySection(_Section):
    external_angle_deg: float = Field(default=DEFAULT_EXTERNAL_ANGLE_DEG, gt=0.0, lt=90.0)


class GridSection(_Section):
    n_omega: int = Field(default_factory=lambda: settings.DEFAULT_N_OMEGA, ge=8)
    n_k: int = Field(default_factory=lambda: settings.DEFAULT_N_K, ge=8)
    max_azimuthal_order: int = Field(default_factory=lambda: settings.MAX_AZIMUTHAL_ORDER, ge=64)
    edge_tolerance: float = Field(default_factory=lambda: settings.EDGE_TOLERANCE, gt=0.0, lt=1.0)
    max_span_doublings: int = Field(default_factory=lambda: settings.MAX_SPAN_DOUBLINGS, ge=1)
    truncation_mass: float = Field(default_factory=lambda: settings.TRUNCATION_MASS, gt=0.0, lt=1.0)
    family_truncation_mass: float = Field(
        default_factory=lambda: settings.FAMILY_TRUNCATION_MASS, gt=0.0, lt=1.0
    )


class CalibrationAnchor(_Section):
    """Conversion fraction of pump-pulse energy into signal photons at a reference power"""
    power_w: float = Field(default=DEFAULT_CALIBRATION_POWER_W, gt=0.0)
    conversion: float = Field(default=DEFAULT_CALIBRATION_CONVERSION, gt=0.0, lt=0.5)


class CouplingSection(_Section):
    """Exactly one of an explicit constant or a calibration anchor"""
    constant: Optional[float] = Field(default=None, gt=0.0)
    calibration: Optional[CalibrationAnchor] = None

    @model_validator(mode="after")
    def check_exclusive(self) -> "CouplingSection":
        if (self.constant is None) == (self.calibration is None):
            raise ValueError("exactly one of 'constant' or 'calibration' is required")
        return self


class SweepSection(_Section):
    power_min_w: float = Field(default=DEFAULT_POWER_MIN_W, gt=0.0)
    power_max_w: float = Field(default=DEFAULT_POWER_MAX_W, gt=0.0)
    points: int = Field(default=DEFAULT_POWER_POINTS, ge=2)
    powers_w: Optional[list[float]] = None
    threshold_observable: ThresholdObservable = ThresholdObservable.CROSS_WIDTH_MAXIMA

    @model_validator(mode="after")
    def check_grid(self) -> "SweepSection":
        if self.powers_w is not None:
            powers = np.asarray(self.powers_w, dtype=float)
            if powers.size < 2 or np.any(np.diff(powers) <= 0) or np.any(powers < 0):
                raise ValueError("powers_w must be non-negative, strictly increasing, with >= 2 points")
        elif self.power_max_w <= self.power_min_w:
            raise ValueError("power_max_w must exceed power_min_w")
        return self

    def power_grid(self) -> np.ndarray:
        """Logarithmic grid unless explicit powers are listed"""
        if self.powers_w is not None:
            return np.asarray(self.powers_w, dtype=float)
        return np.logspace(np.log10(self.power_min_w), np.log10(self.power_max_w), self.points)


class OutputSection(_Section):
    directory: Path = Field(default_factory=lambda: settings.OUTPUT_DIR)
    spectrum_powers_w: list[float] = Field(default_factory=lambda: [DEFAULT_CALIBRATION_POWER_W])


class SourceConfig(BaseModel):
    """Resolved scenario: crystal, pump, geometry, grids, coupling, sweep and outputs"""
    model_config = ConfigDict(extra="forbid")

    name: str = "default"
    crystal: CrystalSection = Field(default_factory=CrystalSection)
    pump: PumpSection = Field(default_factory=PumpSection)
    geometry: GeometrySection = Field(default_factory=GeometrySection)
    grid: GridSection = Field(default_factory=GridSection)
    coupling: CouplingSection = Field(
        default_factory=lambda: CouplingSection(calibration=CalibrationAnchor())
    )
    sweep: SweepSection = Field(default_factory=SweepSection)
    output: OutputSection = Field(default_factory=OutputSection)

    @property
    def external_angle(self) -> float:
        return float(np.deg2rad(self.geometry.external_angle_deg))

    def to_crystal(self, cut_angle: float | None = None) -> CrystalConfig:
        """CrystalConfig in SI units; `cut_angle` (rad) overrides the file value"""
        if cut_angle is None:
            cut_angle = np.deg2rad(self.crystal.cut_angle_deg) if self.crystal.cut_angle_deg else 0.0
        return CrystalConfig(
            length=self.crystal.length_m,
            cut_angle=float(cut_angle),
            ordinary=SellmeierCoefficients(*self.crystal.ordinary),
            extraordinary=SellmeierCoefficients(*self.crystal.extraordinary),
            extended_length=self.crystal.extended_length_m,
        )

    def to_pump(self, power: float = 0.0) -> PumpConfig:
        return PumpConfig(
            wavelength=self.pump.wavelength_m,
            power=power,
            repetition_rate=self.pump.repetition_rate_hz,
            waist=self.pump.waist_m,
            spectral_fwhm=self.pump.spectral_fwhm_m,
            chirp=self.pump.chirp,
            fixed_duration=self.pump.fixed_duration_s,
        )

    def to_grid_spec(self) -> GridSpec:
        return GridSpec(
            n_omega=self.grid.n_omega,
            n_k=self.grid.n_k,
            max_azimuthal_order=self.grid.max_azimuthal_order,
            edge_tolerance=self.grid.edge_tolerance,
            max_span_doublings=self.grid.max_span_doublings,
        )

    def audit(self) -> dict[str, Any]:
        """JSON-safe dump for output headers"""
        return self.model_dump(mode="json")
