# src/services/optics/dispersion.py
"""
Refractive indices, wave vectors and longitudinal phase mismatch
for type-I (eoo) BBO down-conversion.

All functions are pure and accept numpy arrays where it makes sense,
so kernel builders can evaluate whole grids in one call.
"""
import numpy as np
from scipy import optimize

from src.core.config import settings
from src.core.constants import (
    PHASEMATCHING_BRACKET_DEG,
    SELLMEIER_BAND_M,
    SPEED_OF_LIGHT,
    Polarization,
)
from src.core.exception import ConfigurationError, DomainError
from src.core.logging import logger
from src.models.optics import CrystalConfig, Geometry


def _as_result(values: np.ndarray) -> np.ndarray | float:
    return values if values.ndim else float(values)


def refractive_index(
    polarization: Polarization,
    wavelength: np.ndarray | float,
    crystal: CrystalConfig,
    angle: float = 0.0,
) -> np.ndarray | float:
    """
    Index seen by a wave of the given polarization.

    Args:
        polarization: ordinary, or extraordinary at `angle` to the optic axis
        wavelength: vacuum wavelength in metres
        crystal: crystal with its Sellmeier sets
        angle: propagation angle to the optic axis (rad), extraordinary only

    Returns:
        Dimensionless index, same shape as `wavelength`
    """
    wavelength = np.asarray(wavelength, dtype=float)
    low, high = SELLMEIER_BAND_M
    if np.any(wavelength < low * (1 - 1e-12)) or np.any(wavelength > high * (1 + 1e-12)):
        raise DomainError(
            "Wavelength outside the supported Sellmeier band",
            details={
                "min_wavelength_m": float(np.min(wavelength)),
                "max_wavelength_m": float(np.max(wavelength)),
                "band_m": [low, high],
            },
        )

    wavelength_um = wavelength * 1e6
    n_o_sq = crystal.ordinary.index_squared(wavelength_um)
    if polarization == Polarization.ORDINARY:
        return _as_result(np.sqrt(n_o_sq))

    n_e_sq = crystal.extraordinary.index_squared(wavelength_um)
    inverse_sq = np.cos(angle) ** 2 / n_o_sq + np.sin(angle) ** 2 / n_e_sq
    return _as_result(1.0 / np.sqrt(inverse_sq))


def wave_number(
    polarization: Polarization,
    omega: np.ndarray | float,
    crystal: CrystalConfig,
    angle: float = 0.0,
) -> np.ndarray | float:
    """Wave number n(omega)*omega/c in rad/m"""
    omega = np.asarray(omega, dtype=float)
    wavelength = 2.0 * np.pi * SPEED_OF_LIGHT / omega
    index = refractive_index(polarization, wavelength, crystal, angle)
    return _as_result(np.asarray(index) * omega / SPEED_OF_LIGHT)


def build_geometry(
    pump_wavelength: float,
    external_angle: float,
    crystal: CrystalConfig,
) -> Geometry:
    """Degenerate emission geometry from the external ring angle (Snell's law)"""
    pump_frequency = 2.0 * np.pi * SPEED_OF_LIGHT / pump_wavelength
    signal_frequency = pump_frequency / 2.0
    n_signal = refractive_index(Polarization.ORDINARY, 2.0 * pump_wavelength, crystal)

    internal_angle = float(np.arcsin(np.sin(external_angle) / n_signal))
    ring_radius = n_signal * signal_frequency / SPEED_OF_LIGHT * np.sin(internal_angle)

    return Geometry(
        pump_frequency=pump_frequency,
        signal_frequency=signal_frequency,
        external_angle=external_angle,
        internal_angle=internal_angle,
        ring_radius=float(ring_radius),
    )


def _longitudinal(
    omega: np.ndarray,
    transverse: np.ndarray,
    crystal: CrystalConfig,
) -> np.ndarray:
    k = np.asarray(wave_number(Polarization.ORDINARY, omega, crystal))
    radicand = k**2 - transverse**2
    if np.any(radicand < 0):
        raise DomainError(
            "Evanescent configuration: transverse wave vector exceeds k",
            details={"max_transverse_rad_per_m": float(np.max(np.abs(transverse)))},
        )
    return np.sqrt(radicand)


def phase_mismatch_z(
    omega_s: np.ndarray | float,
    omega_i: np.ndarray | float,
    radial_offsets: tuple[np.ndarray | float, np.ndarray | float],
    geometry: Geometry,
    crystal: CrystalConfig,
    cut_angle: float | None = None,
) -> np.ndarray | float:
    """
    Longitudinal mismatch k_pz(ws+wi) - k_sz(ws, kr+dks) - k_iz(wi, kr+dki).

    The pump propagates along z; signal and idler sit on the emission
    ring with outward radial offsets `radial_offsets`.
    """
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    if np.any(omega_s <= 0) or np.any(omega_i <= 0):
        raise DomainError("Frequencies must be positive")

    offset_s, offset_i = (np.asarray(x, dtype=float) for x in radial_offsets)
    theta = crystal.cut_angle if cut_angle is None else cut_angle

    k_pump = np.asarray(
        wave_number(Polarization.EXTRAORDINARY, omega_s + omega_i, crystal, theta)
    )
    k_signal = _longitudinal(omega_s, geometry.ring_radius + offset_s, crystal)
    k_idler = _longitudinal(omega_i, geometry.ring_radius + offset_i, crystal)

    return _as_result(k_pump - k_signal - k_idler)


def find_phasematching_angle(
    geometry: Geometry,
    crystal: CrystalConfig,
    tolerance: float | None = None,
) -> float:
    """
    Cut angle zeroing the mismatch at the degenerate ring point.

    Bracketed bisection over PHASEMATCHING_BRACKET_DEG.
    """
    tolerance = tolerance or settings.BISECTION_TOLERANCE_RAD
    low, high = np.deg2rad(PHASEMATCHING_BRACKET_DEG)

    def mismatch(theta: float) -> float:
        return float(
            phase_mismatch_z(
                geometry.signal_frequency,
                geometry.idler_frequency,
                (0.0, 0.0),
                geometry,
                crystal,
                cut_angle=theta,
            )
        )

    f_low, f_high = mismatch(low), mismatch(high)
    if np.sign(f_low) == np.sign(f_high):
        raise ConfigurationError(
            "No phase-matching angle inside the search bracket",
            details={
                "bracket_deg": list(PHASEMATCHING_BRACKET_DEG),
                "mismatch_rad_per_m": [f_low, f_high],
            },
        )

    theta = optimize.bisect(mismatch, low, high, xtol=tolerance, maxiter=200)
    logger.debug(f"Phase-matching angle {np.rad2deg(theta):.4f} deg (tol {tolerance:.1e} rad)")
    return float(theta)
