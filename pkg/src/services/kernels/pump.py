# src/services/kernels/pump.py
"""
Chirped Gaussian pump: spectral amplitude and pulse photon amplitude
"""
import numpy as np

from src.core.constants import HBAR
from src.core.exception import DomainError
from src.models.kernels import PumpConfig


def pulse_amplitude_xi(pump: PumpConfig) -> float:
    """
    Overall pump amplitude xi_p = sqrt(P / (f * hbar * omega_p)).

    xi_p**2 is the mean number of pump photons per pulse.
    """
    if pump.power < 0:
        raise DomainError("Pump power must be non-negative", details={"power_w": pump.power})
    return float(np.sqrt(pump.power / (pump.repetition_rate * HBAR * pump.central_frequency)))


def pump_spectral_amplitude(
    omega: np.ndarray | float,
    pump: PumpConfig,
) -> np.ndarray | complex:
    """
    Spectral amplitude of the pulse exp(-(1 + i a) t^2 / tau^2).

    Peak magnitude 1 at the central frequency; the chirp only adds a
    quadratic spectral phase and (at fixed duration) broadens the spectrum.
    """
    detuning = np.asarray(omega, dtype=float) - pump.central_frequency
    tau = pump.duration
    a = pump.chirp
    exponent = -(detuning**2) * tau**2 * (1.0 - 1j * a) / (4.0 * (1.0 + a**2))
    values = np.exp(exponent)
    return values if values.ndim else complex(values)
