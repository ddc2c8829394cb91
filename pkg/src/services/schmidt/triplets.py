# src/services/schmidt/triplets.py
"""
Triplet table: product of the three Schmidt families
with adaptive lambda_min truncation
"""
from dataclasses import dataclass

import numpy as np

from src.core.config import settings
from src.core.exception import ConfigurationError
from src.core.logging import logger
from src.models.schmidt import AzimuthalFamily, ModeFamily, TripletTable

# Relative resolution of the lambda_min bisection
_THRESHOLD_RESOLUTION = 1e-13
_MAX_BISECTIONS = 200


@dataclass(frozen=True)
class TripletEntries:
    """Explicit triplets sorted by descending coefficient"""
    m: np.ndarray
    l: np.ndarray
    q: np.ndarray
    multiplicity: np.ndarray
    coefficients: np.ndarray

    @property
    def size(self) -> int:
        return int(self.coefficients.size)


class _MassProfile:
    """Retained count and squared mass of {lambda_mlq >= threshold}"""

    def __init__(self, spectral: np.ndarray, transverse: np.ndarray, multiplicity: np.ndarray):
        self.descending = -spectral
        self.prefix = np.concatenate([[0.0], np.cumsum(spectral**2)])
        self.transverse = transverse
        self.weights = multiplicity[:, None] * transverse**2

    def counts(self, threshold: float) -> np.ndarray:
        with np.errstate(divide="ignore"):
            cut = np.where(self.transverse > 0, threshold / self.transverse, np.inf)
        return np.searchsorted(self.descending, -cut, side="right")

    def mass(self, threshold: float) -> float:
        return float(np.sum(self.weights * self.prefix[self.counts(threshold)]))


def _check_sorted(name: str, coefficients: np.ndarray) -> None:
    if np.any(np.diff(coefficients) > 0) or np.any(coefficients < 0):
        raise ConfigurationError(f"{name} coefficients must be nonnegative and sorted descending")


def assemble_triplets(
    spectral: ModeFamily,
    radial: ModeFamily,
    azimuthal: AzimuthalFamily,
    xi: float,
    truncation_mass: float | None = None,
    max_triplets: int | None = None,
) -> TripletTable:
    """
    Retain the largest triplets until their squared mass reaches 1 - truncation_mass.

    lambda_min is the largest threshold whose retained set
    {lambda_mlq >= lambda_min} meets the mass bound, found by bisection
    on log lambda; the table itself is never expanded.

    Args:
        spectral, radial, azimuthal: normalized families
        xi: overall pump amplitude of the pulse
        truncation_mass: allowed discarded mass
        max_triplets: budget on retained triplets (+m and -m counted separately)

    Returns:
        Factorized TripletTable, with A^N = lambda * xi
    """
    truncation_mass = truncation_mass if truncation_mass is not None else settings.TRUNCATION_MASS
    max_triplets = max_triplets or settings.MAX_TRIPLETS
    _check_sorted("Spectral", spectral.coefficients)
    _check_sorted("Radial", radial.coefficients)

    transverse = azimuthal.coefficients[:, None] * radial.coefficients[None, :]
    profile = _MassProfile(spectral.coefficients, transverse, azimuthal.multiplicity)
    target = 1.0 - truncation_mass

    positive = spectral.coefficients[spectral.coefficients > 0]
    if positive.size == 0 or not np.any(transverse > 0):
        raise ConfigurationError("Schmidt families carry no positive coefficient")
    smallest = float(positive.min() * transverse[transverse > 0].min())
    largest = float(positive.max() * transverse.max())

    available = profile.mass(smallest)
    if available < target:
        raise ConfigurationError(
            "Truncation mass bound unreachable from the retained families",
            details={"available_mass": available, "target": target},
        )

    # mass(low) >= target > mass(high); geometric midpoints
    low, high = smallest, largest
    if profile.mass(largest) >= target:
        low = largest
    for _ in range(_MAX_BISECTIONS):
        if np.log(high / low) <= _THRESHOLD_RESOLUTION:
            break
        middle = float(np.sqrt(low * high))
        if profile.mass(middle) >= target:
            low = middle
        else:
            high = middle

    threshold = low
    counts = profile.counts(threshold)
    retained = counts > 0
    lambda_min = float(np.min(transverse[retained] * spectral.coefficients[counts[retained] - 1]))

    table = TripletTable(
        spectral=spectral.coefficients,
        radial=radial.coefficients,
        azimuthal=azimuthal.coefficients,
        multiplicity=np.asarray(azimuthal.multiplicity, dtype=float),
        spectral_counts=counts.astype(np.int64),
        xi=xi,
        retained_mass=profile.mass(threshold),
        lambda_min=lambda_min,
    )
    if table.count > max_triplets:
        raise ConfigurationError(
            "Retained triplets exceed the budget",
            details={"required": table.count, "budget": max_triplets},
        )

    logger.debug(
        f"Retained {table.size} table entries ({table.count} triplets), "
        f"mass {table.retained_mass:.8f}, lambda_min {table.lambda_min:.3e}"
    )
    return table


def leading_triplets(table: TripletTable, limit: int | None = None) -> TripletEntries:
    """
    The `limit` largest retained triplets (all of them when None), sorted by
    descending coefficient with ties in (m, l, q) order.
    """
    limit = table.size if limit is None else min(limit, table.size)
    block_entries = settings.TRIPLET_BLOCK_ENTRIES

    kept = [np.zeros(0, dtype=np.int64) for _ in range(3)] + [np.zeros(0)]
    for block in table.blocks(block_entries):
        m, l, q = np.nonzero(block.mask)
        candidates = [
            np.concatenate([kept[0], m + block.start]),
            np.concatenate([kept[1], l]),
            np.concatenate([kept[2], q]),
            np.concatenate([kept[3], block.coefficients[block.mask]]),
        ]
        if candidates[3].size > limit:
            best = np.argpartition(-candidates[3], limit - 1)[:limit] if limit else np.zeros(0, dtype=np.int64)
            candidates = [column[best] for column in candidates]
        kept = candidates

    m, l, q, coefficients = kept
    order = np.lexsort((q, l, m, -coefficients))
    return TripletEntries(
        m=m[order],
        l=l[order],
        q=q[order],
        multiplicity=table.multiplicity[m[order]],
        coefficients=coefficients[order],
    )
