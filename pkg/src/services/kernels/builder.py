# src/services/kernels/builder.py
"""
Discretized spectral, radial and azimuthal two-photon kernels.

Grid spans adapt to the kernel: the span doubles until the kernel
envelope is below the edge tolerance on the whole boundary, then a
short bisection trims it back towards the smallest passing span.
"""
from typing import Callable

import numpy as np

from src.core.constants import (
    AZIMUTHAL_OVERSAMPLING,
    AZIMUTHAL_START_ORDER,
    SINC_GAUSS_EQUIVALENT,
)
from src.core.exception import ConfigurationError, DomainError
from src.core.logging import logger
from src.models.kernels import (
    AzimuthalCoefficients,
    Grid1D,
    GridSpec,
    Kernel2D,
    PumpConfig,
)
from src.models.optics import CrystalConfig, Geometry
from src.services.kernels.pump import pump_spectral_amplitude
from src.services.optics.dispersion import phase_mismatch_z

# Pump magnitude below which the phase-matching factor is not evaluated
NEGLIGIBLE_PUMP = 1e-14
SPAN_REFINEMENT_STEPS = 8


def _sinc(x: np.ndarray) -> np.ndarray:
    """sin(x)/x with sinc(0) = 1"""
    return np.sinc(x / np.pi)


def _sinc_envelope(x: np.ndarray) -> np.ndarray:
    return np.exp(-SINC_GAUSS_EQUIVALENT * x**2)


def _boundary(values: np.ndarray) -> np.ndarray:
    return np.concatenate([values[0, :], values[-1, :], values[:, 0], values[:, -1]])


def _edge_ratio(envelope: Callable[[Grid1D], np.ndarray], grid: Grid1D) -> float:
    values = envelope(grid)
    peak = np.max(values)
    if peak <= 0:
        return np.inf
    return float(np.max(_boundary(values)) / peak)


def kernel_edge_ratio(values: np.ndarray) -> float:
    """Largest boundary magnitude of a sampled kernel relative to its peak"""
    magnitude = np.abs(values)
    peak = np.max(magnitude)
    if peak <= 0:
        return np.inf
    return float(np.max(_boundary(magnitude)) / peak)


def finish_kernel(label: str, grid: Grid1D, values: np.ndarray, doublings: int, tolerance: float) -> Kernel2D:
    """Wrap the sampled kernel, warning when its true sinc tails still reach the boundary"""
    edge_ratio = kernel_edge_ratio(values)
    if edge_ratio >= tolerance:
        logger.warning(
            f"{label} kernel boundary at {edge_ratio:.2e} of peak exceeds {tolerance:.0e}; "
            "the sinc side lobes are wider than their Gaussian equivalent"
        )
    return Kernel2D(grid=grid, values=values, span_doublings=doublings, edge_ratio=edge_ratio)


def adapt_half_span(
    envelope: Callable[[Grid1D], np.ndarray],
    center: float,
    initial_half_span: float,
    size: int,
    tolerance: float,
    max_doublings: int,
    label: str,
) -> tuple[Grid1D, int]:
    """
    Smallest tried grid whose envelope boundary is below `tolerance` of its peak.

    Returns the grid and the number of doublings used.
    """

    def passes(half_span: float) -> bool:
        try:
            return _edge_ratio(envelope, Grid1D.from_half_span(center, half_span, size)) < tolerance
        except DomainError as e:
            raise ConfigurationError(
                f"{label} kernel span left the supported domain",
                details={"half_span": half_span, **e.details},
            ) from e

    half_span = initial_half_span
    doublings = 0
    while not passes(half_span):
        if doublings >= max_doublings:
            raise ConfigurationError(
                f"{label} kernel span adaptation failed",
                details={"doublings": doublings, "half_span": half_span},
            )
        half_span *= 2.0
        doublings += 1

    # Find a failing lower bound, then bisect towards it
    lower = half_span / 2.0
    shrinks = 0
    while passes(lower) and shrinks < max_doublings:
        half_span = lower
        lower /= 2.0
        shrinks += 1

    for _ in range(SPAN_REFINEMENT_STEPS):
        middle = 0.5 * (lower + half_span)
        if passes(middle):
            half_span = middle
        else:
            lower = middle

    logger.debug(f"{label} kernel half span {half_span:.4e} after {doublings} doublings")
    return Grid1D.from_half_span(center, half_span, size), doublings


def build_spectral_kernel(
    pump: PumpConfig,
    crystal: CrystalConfig,
    geometry: Geometry,
    grid: GridSpec,
) -> Kernel2D:
    """F(ws, wi) = pump(ws + wi) * sinc(dk_z(ws, wi, 0, 0) * L / 2)"""
    half_length = crystal.length / 2.0

    def factors(axis_grid: Grid1D, envelope: bool) -> np.ndarray:
        omega = axis_grid.axis
        omega_s, omega_i = np.meshgrid(omega, omega, indexing="ij")
        pump_part = pump_spectral_amplitude(omega_s + omega_i, pump)
        out = np.zeros(omega_s.shape, dtype=float if envelope else complex)
        active = np.abs(pump_part) > NEGLIGIBLE_PUMP
        if not np.any(active):
            return out
        x = np.asarray(
            phase_mismatch_z(omega_s[active], omega_i[active], (0.0, 0.0), geometry, crystal)
        ) * half_length
        if envelope:
            out[active] = np.abs(pump_part[active]) * _sinc_envelope(x)
        else:
            out[active] = pump_part[active] * _sinc(x)
        return out

    axis_grid, doublings = adapt_half_span(
        lambda g: factors(g, envelope=True),
        center=geometry.signal_frequency,
        initial_half_span=2.0 * pump.spectral_fwhm_frequency,
        size=grid.n_omega,
        tolerance=grid.edge_tolerance,
        max_doublings=grid.max_span_doublings,
        label="Spectral",
    )
    return finish_kernel("Spectral", axis_grid, factors(axis_grid, envelope=False), doublings, grid.edge_tolerance)


def build_radial_kernel(
    pump: PumpConfig,
    crystal: CrystalConfig,
    geometry: Geometry,
    grid: GridSpec,
) -> Kernel2D:
    """
    R(dks, dki) = exp(-w^2 (dks - dki)^2 / 4) * sinc(dk_z(w0, w0, dks, dki) * L / 2).

    Offsets are outward from the ring on each beam's own side, so the
    transverse momentum sum along the signal axis is dks - dki.
    """
    half_length = crystal.length / 2.0
    waist = pump.waist

    def factors(axis_grid: Grid1D, envelope: bool) -> np.ndarray:
        offset = axis_grid.axis
        offset_s, offset_i = np.meshgrid(offset, offset, indexing="ij")
        # Both offsets point away from the ring centre, so the pump sees dks - dki
        momentum = np.exp(-(waist**2) * (offset_s - offset_i) ** 2 / 4.0)
        x = np.asarray(
            phase_mismatch_z(
                geometry.signal_frequency,
                geometry.idler_frequency,
                (offset_s, offset_i),
                geometry,
                crystal,
            )
        ) * half_length
        return momentum * (_sinc_envelope(x) if envelope else _sinc(x))

    axis_grid, doublings = adapt_half_span(
        lambda g: factors(g, envelope=True),
        center=0.0,
        initial_half_span=4.0 / waist,
        size=grid.n_k,
        tolerance=grid.edge_tolerance,
        max_doublings=grid.max_span_doublings,
        label="Radial",
    )
    return finish_kernel("Radial", axis_grid, factors(axis_grid, envelope=False), doublings, grid.edge_tolerance)


def build_azimuthal_coefficients(
    pump: PumpConfig,
    geometry: Geometry,
    grid: GridSpec,
    tolerance: float | None = None,
) -> AzimuthalCoefficients:
    """
    Fourier coefficients of G(dphi) = exp(-kr^2 w^2 dphi^2 / 4).

    The truncation order doubles from AZIMUTHAL_START_ORDER until
    c_M < tolerance * c_0.
    """
    tolerance = tolerance or grid.edge_tolerance
    width = geometry.ring_radius * pump.waist

    order = AZIMUTHAL_START_ORDER
    while True:
        samples = AZIMUTHAL_OVERSAMPLING * order
        theta = 2.0 * np.pi * np.arange(samples) / samples
        theta = (theta + np.pi) % (2.0 * np.pi) - np.pi
        kernel = np.exp(-(width**2) * theta**2 / 4.0)
        coefficients = np.clip(np.fft.rfft(kernel).real / samples, 0.0, None)[: order + 1]

        if coefficients[order] < tolerance * coefficients[0]:
            break
        if order >= grid.max_azimuthal_order:
            raise ConfigurationError(
                "Azimuthal series truncation bound not met",
                details={"order": order, "ratio": float(coefficients[order] / coefficients[0])},
            )
        order = min(2 * order, grid.max_azimuthal_order)

    # Drop the round-off tail
    significant = np.flatnonzero(coefficients > 1e-12 * coefficients[0])
    last = int(significant[-1]) if significant.size else 0
    result = AzimuthalCoefficients(coefficients=coefficients[: last + 1].copy(), order=last)
    logger.debug(
        f"Azimuthal series order {result.order}, "
        f"{result.effective_modes():.1f} effective modes"
    )
    return result
