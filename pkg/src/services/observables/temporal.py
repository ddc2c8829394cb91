# src/services/observables/temporal.py
"""
Temporal observables from Fourier-transformed spectral modes
"""
from dataclasses import dataclass

import numpy as np
from scipy import fft

from src.core.constants import TEMPORAL_PADDING
from src.models.schmidt import ModeFamily
from src.models.state import Profile1D, Profile2D, TwinBeamState
from src.services.observables.gram import correlation_map, correlation_slice

# 2D temporal maps are cropped to samples where the summed mode intensity
# exceeds this fraction of its peak
_CROP_FLOOR = 1e-8


@dataclass(frozen=True)
class TemporalModes:
    """Spectral Schmidt modes on a time axis, rows normalized to int |g|^2 dt = 1"""
    axis: np.ndarray
    signal_modes: np.ndarray
    idler_modes: np.ndarray

    @property
    def step(self) -> float:
        return float(self.axis[1] - self.axis[0])


def _to_time(modes: np.ndarray, omega_step: float, padded: int) -> np.ndarray:
    samples = modes * np.sqrt(omega_step)
    transformed = fft.fftshift(fft.fft(samples, n=padded, axis=1, norm="ortho"), axes=1)
    time_step = 2.0 * np.pi / (padded * omega_step)
    return transformed / np.sqrt(time_step)


def temporal_modes(family: ModeFamily, padding: int = TEMPORAL_PADDING) -> TemporalModes:
    """
    Unitary DFT of the sampled spectral modes on a zero-padded grid.

    Time is measured relative to the pulse centre; the carrier at the
    grid centre frequency drops out of every intensity.
    """
    omega_step = family.grid.step
    padded = padding * family.grid.size
    axis = fft.fftshift(fft.fftfreq(padded, d=omega_step / (2.0 * np.pi)))
    return TemporalModes(
        axis=axis,
        signal_modes=_to_time(family.signal_modes, omega_step, padded),
        idler_modes=_to_time(family.idler_modes, omega_step, padded),
    )


def _crop(modes: TemporalModes) -> slice:
    envelope = np.sum(np.abs(modes.signal_modes) ** 2, axis=0)
    significant = np.flatnonzero(envelope >= _CROP_FLOOR * envelope.max())
    return slice(int(significant[0]), int(significant[-1]) + 1)


def signal_pulse(state: TwinBeamState, modes: TemporalModes | None = None) -> Profile1D:
    """n_s(t) = sum_mlq |g_q(t)|^2 V^2; integrates to N_s"""
    modes = modes or temporal_modes(state.basis.spectral)
    values = state.reductions.spectral_populations @ np.abs(modes.signal_modes) ** 2
    return Profile1D(modes.axis, values, unit="s", label="signal pulse")


def temporal_correlations(state: TwinBeamState) -> tuple[Profile2D, Profile2D, Profile1D]:
    """
    Temporal auto-correlation A(t, t'), cross-correlation C(t_s, t_i)
    and the signal pulse.

    Returns:
        (auto, cross, pulse); the 2D maps share a cropped time axis
    """
    modes = temporal_modes(state.basis.spectral)
    window = _crop(modes)
    axis = modes.axis[window]
    signal = modes.signal_modes[:, window]
    idler = modes.idler_modes[:, window]

    auto_values = correlation_map(np.conj(signal), signal, state.reductions.spectral_auto_gram)
    cross_values = correlation_map(signal, idler, state.reductions.spectral_cross_gram)

    auto = Profile2D(axis, axis, auto_values, unit="s", label="temporal autocorrelation")
    cross = Profile2D(axis, axis, cross_values, unit="s", label="temporal cross-correlation")
    return auto, cross, signal_pulse(state, modes)


def central_time_index(profile: Profile2D) -> int:
    """Index of t = 0 on a cropped temporal axis"""
    return int(np.argmin(np.abs(profile.axis_y)))


def temporal_slices(state: TwinBeamState) -> tuple[Profile1D, Profile1D, Profile1D]:
    """
    A(t, 0), C(t_s, 0) and the signal pulse without forming the 2D maps.

    Returns:
        (auto slice, cross slice, pulse) on the full padded time axis
    """
    modes = temporal_modes(state.basis.spectral)
    center = modes.axis.size // 2
    signal = modes.signal_modes
    auto = correlation_slice(np.conj(signal), signal[:, center], state.reductions.spectral_auto_gram)
    cross = correlation_slice(signal, modes.idler_modes[:, center], state.reductions.spectral_cross_gram)
    return (
        Profile1D(modes.axis, auto, unit="s", label="temporal autocorrelation slice"),
        Profile1D(modes.axis, cross, unit="s", label="temporal cross-correlation slice"),
        signal_pulse(state, modes),
    )
