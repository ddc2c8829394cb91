# src/services/oracles/classical.py
"""
Runge-Kutta integration of the classical amplitude equations

    dA_p/dz = -s K A_s^2,  dA_s/dz = s K A_p A_s

joined with the linear Bogoliubov system

    dU/dz = s K A_p V,  dV/dz = s K A_p U.

The direction s flips from +1 to -1 when the pump reaches the vacuum
level and back when the signal does, which reproduces the mirrored
continuation of the closed-form solution. Rows whose pump starts at
the vacuum level keep s = +1.
"""
from typing import Optional

import numpy as np

from src.core.config import settings
from src.core.constants import VACUUM_AMPLITUDE
from src.core.exception import DomainError, NumericalError
from src.core.logging import logger
from src.models.dynamics import TripletInit
from src.models.oracles import Trajectory

INITIAL_STEPS = 1024
MAX_STEP_DOUBLINGS = 10
CROSSING_BISECTIONS = 60


def _rhs(y: np.ndarray, coupling: np.ndarray, direction: np.ndarray) -> np.ndarray:
    pump, signal, u, v = y
    rate = direction * coupling
    return np.stack([-rate * signal**2, rate * pump * signal, rate * pump * v, rate * pump * u])


def _rk4(y: np.ndarray, h: np.ndarray, coupling: np.ndarray, direction: np.ndarray) -> np.ndarray:
    k1 = _rhs(y, coupling, direction)
    k2 = _rhs(y + 0.5 * h * k1, coupling, direction)
    k3 = _rhs(y + 0.5 * h * k2, coupling, direction)
    k4 = _rhs(y + h * k3, coupling, direction)
    return y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def _cross(
    y: np.ndarray,
    h: np.ndarray,
    coupling: np.ndarray,
    direction: np.ndarray,
    component: np.ndarray,
) -> np.ndarray:
    """Step across the vacuum crossing of `component`, flipping direction there"""
    rows = np.arange(y.shape[1])
    low, high = np.zeros(h.shape), np.ones(h.shape)
    for _ in range(CROSSING_BISECTIONS):
        middle = 0.5 * (low + high)
        trial = _rk4(y, middle * h, coupling, direction)
        above = trial[component, rows] > VACUUM_AMPLITUDE
        low = np.where(above, middle, low)
        high = np.where(above, high, middle)

    fraction = 0.5 * (low + high)
    at_crossing = _rk4(y, fraction * h, coupling, direction)
    return _rk4(at_crossing, (1.0 - fraction) * h, coupling, -direction)


def _integrate(
    pump0: np.ndarray,
    signal0: np.ndarray,
    coupling: np.ndarray,
    z_end: np.ndarray,
    samples: int,
    steps_per_sample: int,
) -> np.ndarray:
    rows = pump0.size
    y = np.stack([pump0, signal0, np.ones(rows), np.zeros(rows)])
    direction = np.ones(rows)
    periodic = pump0 > signal0
    h = z_end / (samples * steps_per_sample)

    out = np.empty((4, rows, samples + 1))
    out[:, :, 0] = y
    for sample in range(1, samples + 1):
        for _ in range(steps_per_sample):
            trial = _rk4(y, h, coupling, direction)
            forward_cross = periodic & (direction > 0) & (trial[0] < VACUUM_AMPLITUDE)
            reverse_cross = periodic & (direction < 0) & (trial[1] < VACUUM_AMPLITUDE)
            crossing = forward_cross | reverse_cross
            if np.any(crossing):
                component = np.where(forward_cross[crossing], 0, 1)
                trial[:, crossing] = _cross(
                    y[:, crossing], h[crossing], coupling[crossing], direction[crossing], component
                )
                direction = np.where(crossing, -direction, direction)
            y = trial
        out[:, :, sample] = y
    return out


def _row_change(coarse: np.ndarray, fine: np.ndarray, total: np.ndarray) -> np.ndarray:
    """Largest change per row: amplitudes relative to A_ps, U and V relative to U"""
    amplitudes = np.abs(fine[:2] - coarse[:2]) / total[None, :, None]
    bogoliubov = np.abs(fine[2:] - coarse[2:]) / np.abs(fine[2])[None, ...]
    return np.maximum(amplitudes.max(axis=(0, 2)), bogoliubov.max(axis=(0, 2)))


def rk4_batch(inits: list[TripletInit], samples: int = 1, tolerance: Optional[float] = None) -> Trajectory:
    """
    Integrate many inits at once, each over [0, init.z_end].

    Each row doubles its step count from INITIAL_STEPS until halving the
    step changes all of its samples by less than `tolerance` (amplitudes
    relative to A_ps, U and V relative to U); converged rows drop out of
    later refinements. `steps` reports the largest count used.
    """
    tolerance = tolerance or settings.RK4_TOLERANCE
    pump0 = np.array([float(i.pump_amplitude) for i in inits])
    signal0 = np.array([float(i.signal_amplitude) for i in inits])
    coupling = np.array([i.coupling for i in inits])
    z_end = np.array([i.z_end for i in inits])
    total = np.sqrt(pump0**2 + signal0**2)

    result = np.empty((4, pump0.size, samples + 1))
    pending = np.arange(pump0.size)
    steps_per_sample = max(1, -(-INITIAL_STEPS // samples))
    coarse = _integrate(pump0, signal0, coupling, z_end, samples, steps_per_sample)
    for _ in range(MAX_STEP_DOUBLINGS):
        steps_per_sample *= 2
        rows = pending
        fine = _integrate(pump0[rows], signal0[rows], coupling[rows], z_end[rows], samples, steps_per_sample)
        change = _row_change(coarse, fine, total[rows])
        converged = change < tolerance
        result[:, rows[converged]] = fine[:, converged]
        pending = rows[~converged]
        coarse = fine[:, ~converged]
        if pending.size == 0:
            logger.debug(f"RK4 converged with up to {steps_per_sample * samples} steps")
            return Trajectory(
                z=z_end[:, None] * np.linspace(0.0, 1.0, samples + 1)[None, :],
                pump=result[0],
                signal=result[1],
                u=result[2],
                v=result[3],
                steps=steps_per_sample * samples,
            )

    raise NumericalError(
        "RK4 step refinement did not converge",
        details={
            "steps": steps_per_sample * samples,
            "rows": pending.tolist(),
            "change": float(change.max()),
            "tolerance": tolerance,
        },
    )


def _single(init: TripletInit, z_grid: np.ndarray) -> Trajectory:
    z_grid = np.asarray(z_grid, dtype=float)
    spacing = np.diff(z_grid)
    if z_grid.size < 2 or z_grid[0] != 0.0 or np.any(spacing <= 0) or not np.allclose(spacing, spacing[0]):
        raise DomainError("z grid must be uniform, increasing and start at 0")

    batch_init = TripletInit(
        pump_amplitude=float(init.pump_amplitude),
        coupling=init.coupling,
        z_end=float(z_grid[-1]),
        signal_amplitude=float(init.signal_amplitude),
    )
    batch = rk4_batch([batch_init], samples=z_grid.size - 1)
    return Trajectory(
        z=z_grid,
        pump=batch.pump[0],
        signal=batch.signal[0],
        u=batch.u[0],
        v=batch.v[0],
        steps=batch.steps,
    )


def rk4_classical(init: TripletInit, z_grid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(A_p(z), A_s(z)) sampled on the uniform `z_grid`"""
    trajectory = _single(init, z_grid)
    return trajectory.pump, trajectory.signal


def rk4_linear_uv(init: TripletInit, z_grid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(U(z), V(z)) with U(0) = 1, V(0) = 0, driven by the classical pump"""
    trajectory = _single(init, z_grid)
    return trajectory.u, trajectory.v


def rk4_trajectory(init: TripletInit, z_grid: np.ndarray) -> Trajectory:
    return _single(init, z_grid)
