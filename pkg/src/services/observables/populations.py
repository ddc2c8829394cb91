# src/services/observables/populations.py
"""
Mean photon number per Schmidt coefficient and the density of modes
"""
import numpy as np

from src.core.config import settings
from src.core.constants import LAMBDA_BINS_PER_DECADE
from src.core.exception import DomainError
from src.models.state import PopulationHistogram, TwinBeamState


def _log_edges(smallest: float, largest: float, bins_per_decade: int) -> np.ndarray:
    low = np.floor(np.log10(smallest) * bins_per_decade) / bins_per_decade
    high = np.ceil(np.log10(largest) * bins_per_decade) / bins_per_decade
    if high <= low:
        high = low + 1.0 / bins_per_decade
    count = int(round((high - low) * bins_per_decade))
    return np.logspace(low, high, count + 1)


def mode_population_histogram(
    state: TwinBeamState,
    bins_per_decade: int = LAMBDA_BINS_PER_DECADE,
) -> PopulationHistogram:
    """
    rho_lambda, the number of triplets (+m and -m counted separately) per
    logarithmic lambda bin, and n_s,lambda.

    A triplet's V^2 depends on it only through lambda, so n_s,lambda is
    the exit V^2 at the count-weighted mean coefficient of each occupied bin.
    """
    if state.response is None:
        raise DomainError("State carries no response to evaluate mode populations")

    table = state.table
    edges = _log_edges(table.lambda_min, table.largest, bins_per_decade)
    counts = np.zeros(edges.size - 1)
    sums = np.zeros(edges.size - 1)
    for block in table.blocks(settings.TRIPLET_BLOCK_ENTRIES):
        coefficients = block.coefficients[block.mask]
        weights = block.weights[block.mask]
        counts += np.histogram(coefficients, bins=edges, weights=weights)[0]
        sums += np.histogram(coefficients, bins=edges, weights=weights * coefficients)[0]

    occupied = counts > 0
    centers = sums[occupied] / counts[occupied]
    _, v = state.response(centers)
    return PopulationHistogram(
        bin_edges=edges,
        counts=counts,
        coefficients=centers,
        photon_numbers=v**2,
    )
