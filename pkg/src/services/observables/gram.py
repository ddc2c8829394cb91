# src/services/observables/gram.py
"""
Mode-space reductions shared by the correlation observables.

A fourth-order correlation sum_{other} |sum_q a_q(x) b_q(y) W_q|^2
only needs the Gram matrix G_qq' = sum_{other} mult W_q W_q' over the
triplet indices that are summed outside the modulus. All reductions of
one state come from a single streaming pass over the table blocks.
"""
import numpy as np
from scipy import linalg

from src.core.config import settings
from src.core.constants import AZIMUTHAL_PROFILE_POINTS, AZIMUTHAL_PROFILE_SPAN
from src.models.schmidt import SchmidtBasis, TripletTable
from src.models.state import ModeReductions, Response, TwinBeamState

# Eigenvalues below this fraction of the largest are dropped in 2D maps
_EIGEN_FLOOR = 1e-14


def azimuthal_angles(table: TripletTable, points: int = AZIMUTHAL_PROFILE_POINTS) -> np.ndarray:
    """Symmetric angle axis spanning AZIMUTHAL_PROFILE_SPAN periods of the highest retained order"""
    span = float(min(np.pi, AZIMUTHAL_PROFILE_SPAN / max(table.highest_order, 1)))
    return np.linspace(-span, span, points)


def _azimuthal_series(orders: np.ndarray, multiplicity: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """mult_m cos(m dphi): D_0 + 2 sum_{m>0} D_m cos(m dphi) for orders stored as m >= 0"""
    return multiplicity[:, None] * np.cos(orders[:, None] * angles[None, :])


def _row_gram(rows: np.ndarray, weights: np.ndarray) -> np.ndarray:
    return (rows * weights[:, None]).T @ rows


def accumulate_reductions(
    table: TripletTable,
    response: Response,
    azimuthal_points: int = AZIMUTHAL_PROFILE_POINTS,
    block_entries: int | None = None,
) -> ModeReductions:
    """
    Photon number, populations, Grams and the azimuthal profile in one pass.

    Blocks are visited in a fixed order, so the sums do not depend on
    which thread evaluates the state.
    """
    block_entries = block_entries or settings.TRIPLET_BLOCK_ENTRIES
    _, radial_size, spectral_size = table.shape
    angles = azimuthal_angles(table, azimuthal_points)

    photons = gain_sum = gain_square_sum = 0.0
    spectral_populations = np.zeros(spectral_size)
    radial_populations = np.zeros(radial_size)
    spectral_auto = np.zeros((spectral_size, spectral_size))
    spectral_cross = np.zeros((spectral_size, spectral_size))
    radial_cross = np.zeros((radial_size, radial_size))
    amplitudes = np.zeros((radial_size * spectral_size, angles.size))

    for block in table.blocks(block_entries):
        u, v = response(block.coefficients[block.mask])
        photon = np.zeros(block.coefficients.shape)
        photon[block.mask] = v**2
        gain = np.zeros(block.coefficients.shape)
        gain[block.mask] = u * v

        weights = block.weights
        photons += float(np.sum(weights * photon))
        gain_sum += float(np.sum(weights * gain**2))
        gain_square_sum += float(np.sum(weights * gain**4))
        spectral_populations += np.sum(weights * photon, axis=(0, 1))
        radial_populations += np.sum(weights * photon, axis=(0, 2))

        rows = block.coefficients.shape[0]
        spectral_weights = np.repeat(block.multiplicity, radial_size)
        spectral_auto += _row_gram(photon.reshape(rows * radial_size, spectral_size), spectral_weights)
        spectral_cross += _row_gram(gain.reshape(rows * radial_size, spectral_size), spectral_weights)
        radial_rows = gain.transpose(0, 2, 1).reshape(rows * spectral_size, radial_size)
        radial_cross += _row_gram(radial_rows, np.repeat(block.multiplicity, spectral_size))

        orders = np.arange(block.start, block.stop)
        series = _azimuthal_series(orders, block.multiplicity, angles)
        amplitudes += gain.transpose(1, 2, 0).reshape(radial_size * spectral_size, rows) @ series

    return ModeReductions(
        photon_number=photons,
        gain_sum=gain_sum,
        gain_square_sum=gain_square_sum,
        spectral_populations=spectral_populations,
        radial_populations=radial_populations,
        spectral_auto_gram=spectral_auto,
        spectral_cross_gram=spectral_cross,
        radial_cross_gram=radial_cross,
        azimuthal_angles=angles,
        azimuthal_profile=np.sum(amplitudes**2, axis=0) / (4.0 * np.pi**2),
    )


def total_photon_number(table: TripletTable, response: Response, block_entries: int | None = None) -> float:
    """N_s = sum mult V^2 without the correlation reductions"""
    block_entries = block_entries or settings.TRIPLET_BLOCK_ENTRIES
    total = 0.0
    for block in table.blocks(block_entries):
        _, v = response(block.coefficients[block.mask])
        total += float(np.sum(block.weights[block.mask] * v**2))
    return total


def build_state(
    table: TripletTable,
    basis: SchmidtBasis,
    response: Response,
    power: float,
    ring_radius: float = 0.0,
) -> TwinBeamState:
    """Exit state whose reductions follow from the per-coefficient response"""
    return TwinBeamState(
        table=table,
        basis=basis,
        reductions=accumulate_reductions(table, response),
        power=power,
        ring_radius=ring_radius,
        response=response,
    )


def correlation_slice(left: np.ndarray, right_at: np.ndarray, gram: np.ndarray) -> np.ndarray:
    """
    sum_qq' G_qq' a_q(x) conj(a_q'(x)) with a_q(x) = left[q, x] * right_at[q]
    """
    a = left.T * right_at[None, :]
    return np.real(np.sum((a @ gram) * np.conj(a), axis=1))


def correlation_map(left: np.ndarray, right: np.ndarray, gram: np.ndarray) -> np.ndarray:
    """
    sum_qq' G_qq' Y_q(x, y) conj(Y_q'(x, y)) with Y_q = left[q, x] right[q, y].

    Accumulated over the eigenvectors of G in a fixed order.
    """
    eigenvalues, vectors = linalg.eigh(gram)
    out = np.zeros((left.shape[1], right.shape[1]))
    if eigenvalues.size == 0 or eigenvalues[-1] <= 0:
        return out

    floor = _EIGEN_FLOOR * eigenvalues[-1]
    for r in range(eigenvalues.size - 1, -1, -1):
        if eigenvalues[r] <= floor:
            break
        amplitude = (left.T * vectors[:, r][None, :]) @ right
        out += eigenvalues[r] * np.abs(amplitude) ** 2
    return out
