# src/services/dynamics/triplet.py
"""
Per-triplet dynamics under the generalized parametric approximation.

The classical depleted-pump solution runs until the pump falls to the
vacuum level at z0; on [z0, 2z0] everything mirrors (z -> 2 z0 - z)
and the evolution repeats with period 2 z0. A triplet whose pump
starts at the vacuum level (z0 = 0) is evaluated without mirroring.

Every function accepts vectorized inits.
"""
from dataclasses import dataclass

import numpy as np

from src.models.dynamics import TripletInit, TripletSolution

# Above this 2u the log1p form of the phase would overflow
_LOG1P_LIMIT = 50.0


def depletion_length(init: TripletInit) -> np.ndarray | float:
    """z0 = ln(1 + 2 A_ps (A_p - A_s) / ((A_ps + A_s) d)) / (2 K A_ps)"""
    a_ps = init.total_amplitude
    gap = init.depletion_gap
    ratio = (2.0 * a_ps / (a_ps + init.signal_amplitude)) * (
        np.asarray(init.pump_amplitude) - init.signal_amplitude
    ) / gap
    return np.log1p(ratio) / (2.0 * init.coupling * a_ps)


def _reduced_position(init: TripletInit, z: np.ndarray | float) -> np.ndarray:
    """Map z onto the first half period [0, z0] (identity when z0 = 0)"""
    z0 = np.asarray(depletion_length(init))
    z = np.broadcast_to(np.asarray(z, dtype=float), np.broadcast(z0, z).shape)
    z0 = np.broadcast_to(z0, z.shape)

    reduced = np.array(z, copy=True)
    periodic = z0 > 0
    if np.any(periodic):
        period = 2.0 * z0[periodic]
        r = np.mod(z[periodic], period)
        reduced[periodic] = np.where(r > z0[periodic], period - r, r)
    return reduced


def _scaled_position(init: TripletInit, z: np.ndarray | float) -> np.ndarray:
    return init.coupling * init.total_amplitude * _reduced_position(init, z)


def classical_amplitudes(
    init: TripletInit,
    z: np.ndarray | float,
) -> tuple[np.ndarray | float, np.ndarray | float]:
    """
    Depleted-pump amplitudes (A_p(z), A_s(z)).

    A_p = A_ps tanh(c - u), A_s = A_ps / cosh(c - u), with
    u = K A_ps z and tanh(c) = A_p(0) / A_ps.
    """
    a_ps = init.total_amplitude
    c = 0.5 * np.log((a_ps + init.pump_amplitude) / init.depletion_gap)
    u = _scaled_position(init, z)
    with np.errstate(over="ignore"):
        pump = a_ps * np.tanh(c - u)
        signal = a_ps / np.cosh(c - u)
    return pump[()], signal[()]


def phase_integral(init: TripletInit, z: np.ndarray | float) -> np.ndarray | float:
    """
    phi(z) = integral of K A_p over [0, z] on the first half period.

    phi = u - ln(alpha + beta e^{2u}) with alpha + beta = 1,
    alpha = (A_ps + A_p)/(2 A_ps), beta = d/(2 A_ps).
    """
    a_ps = init.total_amplitude
    beta = init.depletion_gap / (2.0 * a_ps)
    alpha = (a_ps + init.pump_amplitude) / (2.0 * a_ps)
    u = _scaled_position(init, z)

    small = 2.0 * u < _LOG1P_LIMIT
    with np.errstate(over="ignore"):
        near = np.log1p(beta * np.expm1(np.where(small, 2.0 * u, 0.0)))
        far = np.logaddexp(np.log(alpha), np.log(beta) + 2.0 * u)
    return (u - np.where(small, near, far))[()]


def exit_coefficients(init: TripletInit) -> TripletSolution:
    """Bogoliubov coefficients U = cosh(phi), V = sinh(phi) at z_end"""
    phase = phase_integral(init, init.z_end)
    pump, signal = classical_amplitudes(init, init.z_end)
    return TripletSolution(
        depletion_length=depletion_length(init),
        phase=phase,
        u=np.cosh(phase),
        v=np.sinh(phase),
        pump_exit=pump,
        signal_exit=signal,
    )


def solve_coefficients(
    coefficients: np.ndarray | float,
    xi: float,
    coupling: float,
    z_end: float,
) -> TripletSolution:
    """Exit solutions of triplets with Schmidt coefficients `coefficients`, A^N = lambda * xi"""
    init = TripletInit.from_photon_amplitude(np.asarray(coefficients, dtype=float) * xi, coupling, z_end)
    return exit_coefficients(init)


@dataclass(frozen=True)
class ExitResponse:
    """
    Exit (U, V) as a function of the triplet coefficient.

    A triplet's dynamics depends on its indices only through lambda_mlq,
    so one response serves the whole table at a given power.
    """
    xi: float
    coupling: float
    z_end: float

    def __call__(self, coefficients: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        solution = solve_coefficients(coefficients, self.xi, self.coupling, self.z_end)
        return np.asarray(solution.u, dtype=float), np.asarray(solution.v, dtype=float)
