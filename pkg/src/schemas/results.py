# src/schemas/results.py
"""
Result records emitted by sweeps, calibration and the oracle suite
"""
from typing import Any, Optional

from pydantic import BaseModel, Field

from src.core.constants import ThresholdObservable


class SweepRecord(BaseModel):
    """One power point of a sweep; widths in rad/s, s, rad/m and rad"""
    power_w: float
    photon_number: float
    k_dim: float
    k_dim_fallback: bool = False
    fedorov_spectral: float
    fedorov_spatial: float
    spectrum_fwhm: float
    cross_spectral_fwhm: float
    auto_spectral_fwhm: float
    cross_temporal_fwhm: float
    auto_temporal_fwhm: float
    pulse_duration: float
    ring_fwhm: float
    cross_radial_fwhm: float
    cross_azimuthal_fwhm: float
    multimodal_spectrum: bool = False
    multimodal_cross_spectral: bool = False
    multimodal_auto_spectral: bool = False
    multimodal_cross_temporal: bool = False
    multimodal_auto_temporal: bool = False
    multimodal_transverse: bool = False
    truncated_profiles: list[str] = Field(default_factory=list)


class ThresholdReport(BaseModel):
    """Threshold powers, ranked by power"""
    observable: ThresholdObservable
    powers_w: list[float] = Field(default_factory=list)
    indices: list[int] = Field(default_factory=list)

    @property
    def p_th(self) -> Optional[float]:
        return self.powers_w[0] if self.powers_w else None

    @property
    def p_th1(self) -> Optional[float]:
        return self.powers_w[1] if len(self.powers_w) > 1 else None

    @property
    def p_th2(self) -> Optional[float]:
        return self.powers_w[2] if len(self.powers_w) > 2 else None


class CalibrationResult(BaseModel):
    coupling: float = Field(gt=0.0)
    power_w: float
    target_conversion: float
    achieved_conversion: float
    iterations: int


class OracleCheck(BaseModel):
    """One oracle comparison; `gated` checks decide the verdict"""
    name: str
    value: float
    tolerance: float
    passed: bool
    gated: bool = True


class OracleReport(BaseModel):
    checks: list[OracleCheck] = Field(default_factory=list)
    metadata: dict[str, Any] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks if check.gated)
