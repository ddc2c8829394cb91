# src/services/sweep/calibration.py
"""
Coupling constant from an energy-conversion anchor
"""
from typing import Optional

import numpy as np
from scipy import optimize

from src.core.config import settings
from src.core.constants import CALIBRATION_MAX_DOUBLINGS, CALIBRATION_START_PHASE, HBAR
from src.core.exception import ConfigurationError, NumericalError
from src.core.logging import logger
from src.models.dynamics import TripletInit
from src.schemas.results import CalibrationResult
from src.services.dynamics.triplet import depletion_length
from src.services.simulator import TwinBeamSimulator


def conversion_fraction(simulator: TwinBeamSimulator, power: float, coupling: float) -> float:
    """N_s * hbar * w_s / (P / f): signal-photon share of the pulse energy at length L"""
    photons = simulator.with_coupling(coupling).photon_number_at(power, simulator.crystal.length)
    pulse_energy = power / simulator.config.pump.repetition_rate_hz
    return photons * HBAR * simulator.geometry.signal_frequency / pulse_energy


def first_depletion_coupling(simulator: TwinBeamSimulator, power: float) -> float:
    """
    Smallest K at which some retained triplet reaches its depletion
    length within the crystal length L.

    z0 scales as 1/K, so it follows from z0 at K = 1. Below this K
    every triplet is still in its first growth stage and the
    conversion is strictly increasing in K.
    """
    xi = simulator.xi_at(power)
    shortest = np.inf
    for block in simulator.table.blocks(settings.TRIPLET_BLOCK_ENTRIES):
        amplitudes = block.coefficients[block.mask] * xi
        z0 = np.asarray(depletion_length(TripletInit.from_photon_amplitude(amplitudes, 1.0, 0.0)))
        if np.any(z0 > 0):
            shortest = min(shortest, float(np.min(z0[z0 > 0])))
    return shortest / simulator.crystal.length


def calibrate_coupling(
    simulator: TwinBeamSimulator,
    power: float,
    conversion: float,
    rtol: Optional[float] = None,
) -> CalibrationResult:
    """
    Solve conversion_fraction(K) = `conversion` at `power`.

    Starts where the strongest triplet gains a phase of about
    CALIBRATION_START_PHASE and doubles K until the target is passed,
    stopping once at the first-depletion coupling, then bisects on log K.
    The weakest coupling reaching the target is preferred.
    """
    rtol = rtol or settings.CALIBRATION_RTOL
    if not 0.0 < conversion < 0.5:
        raise ConfigurationError(
            "Conversion fraction must lie in (0, 0.5)", details={"conversion": conversion}
        )
    if power <= 0:
        raise ConfigurationError("Calibration power must be positive", details={"power_w": power})

    strongest = simulator.table.largest * simulator.xi_at(power)
    low = CALIBRATION_START_PHASE / (strongest * simulator.crystal.length)

    def residual(log_coupling: float) -> float:
        return conversion_fraction(simulator, power, float(np.exp(log_coupling))) / conversion - 1.0

    if residual(np.log(low)) >= 0:
        raise ConfigurationError(
            "Calibration target already exceeded at the weakest coupling",
            details={"coupling": low, "conversion": conversion},
        )

    ceiling = first_depletion_coupling(simulator, power)
    logger.debug(f"First depletion at K = {ceiling:.6e}")

    high = low
    for doublings in range(1, CALIBRATION_MAX_DOUBLINGS + 1):
        high *= 2.0
        if low < ceiling < high:
            high = ceiling
        if residual(np.log(high)) > 0:
            break
        low = high
    else:
        raise ConfigurationError(
            "Calibration target not bracketable",
            details={"power_w": power, "conversion": conversion, "last_coupling": high},
        )

    log_root, info = optimize.bisect(
        residual, np.log(low), np.log(high), xtol=1e-12, rtol=1e-14, full_output=True
    )
    coupling = float(np.exp(log_root))
    achieved = conversion_fraction(simulator, power, coupling)
    if abs(achieved / conversion - 1.0) > rtol:
        raise NumericalError(
            "Calibration bisection did not reach the conversion tolerance",
            details={"achieved": achieved, "target": conversion, "rtol": rtol},
        )

    logger.info(f"✅ Calibrated K = {coupling:.6e} ({achieved:.4%} at {power:.3g} W)")
    return CalibrationResult(
        coupling=coupling,
        power_w=power,
        target_conversion=conversion,
        achieved_conversion=achieved,
        iterations=doublings + info.iterations,
    )
