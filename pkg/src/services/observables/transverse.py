# src/services/observables/transverse.py
"""
Transverse observables: ring profile, radial and azimuthal cross-correlations
"""
import numpy as np

from src.core.constants import AZIMUTHAL_PROFILE_POINTS
from src.core.exception import DomainError
from src.models.state import Profile1D, Profile2D, TwinBeamState
from src.services.observables.gram import accumulate_reductions, correlation_map, correlation_slice


def ring_profile(state: TwinBeamState) -> Profile1D:
    """n_s(dk) = sum_mlq |u_l(dk)|^2 V^2 across the ring"""
    family = state.basis.radial
    values = state.reductions.radial_populations @ np.abs(family.signal_modes) ** 2
    return Profile1D(family.grid.axis, values, unit="rad/m", label="ring profile")


def radial_crosscorrelation(state: TwinBeamState) -> Profile2D:
    """C_k(dk_s, dk_i) = sum_mq |sum_l u_s,l u_i,l U V|^2"""
    family = state.basis.radial
    values = correlation_map(family.signal_modes, family.idler_modes, state.reductions.radial_cross_gram)
    axis = family.grid.axis
    return Profile2D(axis, axis, values, unit="rad/m", label="radial cross-correlation")


def radial_crosscorrelation_slice(state: TwinBeamState, index: int | None = None) -> Profile1D:
    family = state.basis.radial
    index = family.grid.center_index if index is None else index
    values = correlation_slice(
        family.signal_modes, family.idler_modes[:, index], state.reductions.radial_cross_gram
    )
    return Profile1D(family.grid.axis, values, unit="rad/m", label="radial cross-correlation slice")


def azimuthal_crosscorrelation(
    state: TwinBeamState,
    points: int = AZIMUTHAL_PROFILE_POINTS,
) -> Profile1D:
    """
    C_phi(dphi) = sum_lq |(1/2pi) sum_m U V e^{i m dphi}|^2.

    The default sampling comes with the state; other point counts take
    a fresh pass over the table.
    """
    reductions = state.reductions
    if points != reductions.azimuthal_angles.size:
        if state.response is None:
            raise DomainError("State carries no response to resample the azimuthal profile")
        reductions = accumulate_reductions(state.table, state.response, azimuthal_points=points)
    return Profile1D(
        reductions.azimuthal_angles,
        reductions.azimuthal_profile,
        unit="rad",
        label="azimuthal cross-correlation",
    )


def transverse_correlations(state: TwinBeamState) -> tuple[Profile2D, Profile1D, Profile1D]:
    """
    Returns:
        (radial cross-correlation map, azimuthal cross-correlation, ring profile)
    """
    return radial_crosscorrelation(state), azimuthal_crosscorrelation(state), ring_profile(state)
