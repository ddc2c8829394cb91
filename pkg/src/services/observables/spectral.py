# src/services/observables/spectral.py
"""
Spectral observables: signal spectrum, photon number,
intensity auto-/cross-correlations and entanglement dimensionality
"""
import numpy as np

from src.core.logging import logger
from src.models.state import Dimensionality, Profile1D, Profile2D, TwinBeamState
from src.services.observables.gram import correlation_map, correlation_slice


def photon_number(state: TwinBeamState) -> float:
    """N_s = sum of V^2 over all triplets"""
    return state.reductions.photon_number


def signal_spectrum(state: TwinBeamState) -> Profile1D:
    """n_s(ws) = sum_mlq |f_q(ws)|^2 V_mlq^2"""
    family = state.basis.spectral
    values = state.reductions.spectral_populations @ np.abs(family.signal_modes) ** 2
    return Profile1D(family.grid.axis, values, unit="rad/s", label="signal spectrum")


def spectral_autocorrelation(state: TwinBeamState) -> Profile2D:
    """A(ws, ws') = sum_ml |sum_q conj(f_q(ws)) f_q(ws') V^2|^2"""
    family = state.basis.spectral
    modes = family.signal_modes
    values = correlation_map(np.conj(modes), modes, state.reductions.spectral_auto_gram)
    axis = family.grid.axis
    return Profile2D(axis, axis, values, unit="rad/s", label="spectral autocorrelation")


def spectral_crosscorrelation(state: TwinBeamState) -> Profile2D:
    """C(ws, wi) = sum_ml |sum_q f_s,q(ws) f_i,q(wi) U V|^2"""
    family = state.basis.spectral
    values = correlation_map(family.signal_modes, family.idler_modes, state.reductions.spectral_cross_gram)
    axis = family.grid.axis
    return Profile2D(axis, axis, values, unit="rad/s", label="spectral cross-correlation")


def autocorrelation_slice(state: TwinBeamState, index: int | None = None) -> Profile1D:
    """A(ws, ws0) at the central grid frequency unless `index` is given"""
    family = state.basis.spectral
    index = family.grid.center_index if index is None else index
    modes = family.signal_modes
    values = correlation_slice(np.conj(modes), modes[:, index], state.reductions.spectral_auto_gram)
    return Profile1D(family.grid.axis, values, unit="rad/s", label="spectral autocorrelation slice")


def crosscorrelation_slice(state: TwinBeamState, index: int | None = None) -> Profile1D:
    """C(ws, wi0) at the central idler frequency unless `index` is given"""
    family = state.basis.spectral
    index = family.grid.center_index if index is None else index
    values = correlation_slice(
        family.signal_modes, family.idler_modes[:, index], state.reductions.spectral_cross_gram
    )
    return Profile1D(family.grid.axis, values, unit="rad/s", label="spectral cross-correlation slice")


def normalized_crosscorrelation_slice(state: TwinBeamState) -> Profile1D:
    """C^r(ws) = C(ws, wi0) / C(ws0, wi0)"""
    profile = crosscorrelation_slice(state)
    center = profile.values[state.basis.spectral.grid.center_index]
    values = profile.values / center if center > 0 else profile.values
    return Profile1D(profile.axis, values, unit=profile.unit, label="normalized cross-correlation slice")


def entanglement_dimensionality(state: TwinBeamState) -> Dimensionality:
    """K_dim = (sum U^2 V^2)^2 / sum U^4 V^4"""
    denominator = state.reductions.gain_square_sum
    if denominator == 0.0:
        logger.warning("All V vanish; reporting the weak-limit Schmidt number")
        return Dimensionality(value=state.table.schmidt_number(), fallback=True)
    return Dimensionality(value=state.reductions.gain_sum**2 / denominator)
