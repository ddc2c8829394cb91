# src/models/schmidt.py
"""
Schmidt mode families, the per-scenario basis and the triplet table
"""
from collections.abc import Iterator
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from src.models.kernels import Grid1D


@dataclass(frozen=True)
class ModeFamily:
    """
    Schmidt coefficients with sampled signal/idler mode functions.

    Rows of `signal_modes` / `idler_modes` are modes, orthonormal under
    the grid quadrature sum(conj(f) g) * grid.step. The kernel is
    sum_q coefficients[q] * signal_modes[q](x) * idler_modes[q](y)
    up to the family normalization.
    """
    coefficients: np.ndarray
    signal_modes: np.ndarray
    idler_modes: np.ndarray
    grid: Grid1D
    retained_mass: float = 1.0

    @property
    def size(self) -> int:
        return int(self.coefficients.size)

    @property
    def weight(self) -> float:
        """Quadrature weight of the uniform grid"""
        return self.grid.step

    def schmidt_number(self) -> float:
        squares = self.coefficients**2
        return float(squares.sum() ** 2 / np.sum(squares**2))

    def truncated(self, mass: float) -> "ModeFamily":
        """Smallest leading subset whose squared coefficients reach 1 - mass"""
        cumulative = np.cumsum(self.coefficients**2)
        count = int(np.searchsorted(cumulative, 1.0 - mass) + 1)
        count = min(count, self.size)
        return replace(
            self,
            coefficients=self.coefficients[:count],
            signal_modes=self.signal_modes[:count],
            idler_modes=self.idler_modes[:count],
            retained_mass=float(cumulative[count - 1]),
        )


@dataclass(frozen=True)
class AzimuthalFamily:
    """lambda_m^az = sqrt(c_m) for m >= 0, normalized over m in [-M, M]"""
    coefficients: np.ndarray
    multiplicity: np.ndarray

    @property
    def size(self) -> int:
        return int(self.coefficients.size)

    def schmidt_number(self) -> float:
        squares = self.coefficients**2
        return float(
            np.sum(self.multiplicity * squares) ** 2 / np.sum(self.multiplicity * squares**2)
        )


@dataclass(frozen=True)
class SchmidtBasis:
    """Mode structure of one scenario; independent of pump power"""
    spectral: ModeFamily
    radial: ModeFamily
    azimuthal: AzimuthalFamily

    def family_schmidt_numbers(self) -> dict[str, float]:
        return {
            "spectral": self.spectral.schmidt_number(),
            "radial": self.radial.schmidt_number(),
            "azimuthal": self.azimuthal.schmidt_number(),
        }


@dataclass(frozen=True)
class TripletBlock:
    """
    Dense slab of the triplet table over azimuthal orders [start, stop).

    Entries outside `mask` are not retained and carry a zero coefficient.
    """
    start: int
    coefficients: np.ndarray
    mask: np.ndarray
    multiplicity: np.ndarray

    @property
    def stop(self) -> int:
        return self.start + self.coefficients.shape[0]

    @property
    def weights(self) -> np.ndarray:
        """Multiplicity broadcast over the block"""
        return np.broadcast_to(self.multiplicity[:, None, None], self.coefficients.shape)


@dataclass(frozen=True)
class TripletTable:
    """
    Retained triplets lambda_mlq = lambda_m^az * lambda_l * lambda_q >= lambda_min.

    Stored factorized: since every family is sorted descending, the
    retained spectral modes of a transverse pair (m, l) are the leading
    spectral_counts[m, l] ones. Azimuthal entry m stands for +m and -m
    when its multiplicity is 2.
    """
    spectral: np.ndarray
    radial: np.ndarray
    azimuthal: np.ndarray
    multiplicity: np.ndarray
    spectral_counts: np.ndarray
    xi: float
    retained_mass: float
    lambda_min: float

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.azimuthal.size, self.radial.size, self.spectral.size

    @cached_property
    def transverse(self) -> np.ndarray:
        """lambda_ml = lambda_m^az * lambda_l"""
        return self.azimuthal[:, None] * self.radial[None, :]

    @property
    def size(self) -> int:
        """Retained table entries"""
        return int(self.spectral_counts.sum())

    @property
    def count(self) -> int:
        """Triplets counting +m and -m separately"""
        return int(np.sum(self.multiplicity[:, None] * self.spectral_counts))

    @property
    def largest(self) -> float:
        return float(self.azimuthal.max() * self.radial.max() * self.spectral.max())

    @property
    def highest_order(self) -> int:
        """Largest azimuthal order with a retained entry"""
        active = np.flatnonzero(self.spectral_counts.any(axis=1))
        return int(active[-1]) if active.size else 0

    def with_xi(self, xi: float) -> "TripletTable":
        return replace(self, xi=xi)

    def blocks(self, max_entries: int) -> Iterator[TripletBlock]:
        """Retained entries in slabs of at most `max_entries` dense cells, by ascending m"""
        orders, radial, spectral = self.shape
        stop = self.highest_order + 1 if self.size else 0
        rows = max(1, max_entries // max(radial * spectral, 1))
        q = np.arange(spectral)

        for start in range(0, stop, rows):
            end = min(start + rows, stop)
            mask = q[None, None, :] < self.spectral_counts[start:end, :, None]
            values = self.transverse[start:end, :, None] * self.spectral[None, None, :]
            yield TripletBlock(
                start=start,
                coefficients=np.where(mask, values, 0.0),
                mask=mask,
                multiplicity=self.multiplicity[start:end],
            )

    def _moment(self, power: int) -> float:
        prefix = np.concatenate([[0.0], np.cumsum(self.spectral**power)])
        return float(np.sum(self.multiplicity[:, None] * self.transverse**power * prefix[self.spectral_counts]))

    def schmidt_number(self) -> float:
        """(sum mult lambda^2)^2 / sum mult lambda^4 over retained triplets"""
        return self._moment(2) ** 2 / self._moment(4)
