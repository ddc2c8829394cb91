# src/services/schmidt/decomposition.py
"""
Schmidt decomposition of sampled kernels.

Two backends:
- svd_schmidt: weighted SVD of any sampled kernel
- analytic_gaussian_basis: closed-form Hermite-Gauss modes of the
  double-Gaussian kernel (Mehler expansion), used as an oracle
"""
import numpy as np
from scipy import linalg

from src.core.exception import DomainError, NumericalError
from src.core.logging import logger
from src.models.kernels import AzimuthalCoefficients, Grid1D, Kernel2D
from src.models.schmidt import AzimuthalFamily, ModeFamily

# Components below this fraction of a mode's peak never fix its phase
PHASE_REFERENCE_FLOOR = 1e-8


def _fix_phases(left: np.ndarray, right: np.ndarray) -> None:
    """First significant component of each left mode made real positive (in place)"""
    for row in range(left.shape[0]):
        magnitude = np.abs(left[row])
        reference = int(np.argmax(magnitude > PHASE_REFERENCE_FLOOR * magnitude.max()))
        phase = left[row, reference] / magnitude[reference]
        left[row] *= np.conj(phase)
        right[row] *= phase


def svd_schmidt(
    kernel: np.ndarray,
    weights: tuple[float, float],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Weighted SVD of a sampled kernel.

    Args:
        kernel: samples K(x_i, y_j)
        weights: uniform quadrature weights (dx, dy)

    Returns:
        (coefficients, left_modes, right_modes): coefficients sorted
        descending with squares summing to 1; modes as rows, orthonormal
        under the weighted inner product, with
        K(x, y) proportional to sum_q c_q left_q(x) right_q(y).
    """
    dx, dy = weights
    if not np.all(np.isfinite(kernel)):
        raise NumericalError("Kernel contains non-finite samples")
    if dx <= 0 or dy <= 0:
        raise DomainError("Quadrature weights must be positive", details={"weights": [dx, dy]})

    scaled = np.asarray(kernel, dtype=complex) * np.sqrt(dx * dy)
    try:
        u, s, vh = linalg.svd(scaled, full_matrices=False, lapack_driver="gesdd")
    except linalg.LinAlgError:
        logger.warning("gesdd did not converge, retrying with gesvd")
        try:
            u, s, vh = linalg.svd(scaled, full_matrices=False, lapack_driver="gesvd")
        except linalg.LinAlgError as e:
            raise NumericalError(
                "SVD did not converge",
                details={
                    "shape": list(scaled.shape),
                    "frobenius_norm": float(np.linalg.norm(scaled)),
                },
            ) from e

    norm = np.sqrt(np.sum(s**2))
    if norm == 0:
        raise DomainError("Kernel is identically zero")

    left = np.ascontiguousarray(u.T) / np.sqrt(dx)
    right = np.ascontiguousarray(vh) / np.sqrt(dy)
    _fix_phases(left, right)
    return s / norm, left, right


def decompose_kernel(kernel: Kernel2D, truncation_mass: float | None = None) -> ModeFamily:
    """Mode family of a 2D kernel, optionally truncated by retained mass"""
    step = kernel.grid.step
    coefficients, left, right = svd_schmidt(kernel.values, (step, step))
    family = ModeFamily(
        coefficients=coefficients,
        signal_modes=left,
        idler_modes=right,
        grid=kernel.grid,
    )
    if truncation_mass is not None:
        family = family.truncated(truncation_mass)
    return family


def hermite_functions(x: np.ndarray, scale: float, count: int) -> np.ndarray:
    """Normalized Hermite-Gauss functions of width `scale`, rows n = 0..count-1"""
    xi = np.asarray(x, dtype=float) / scale
    out = np.empty((count, xi.size))
    out[0] = np.pi**-0.25 * np.exp(-(xi**2) / 2.0)
    if count > 1:
        out[1] = np.sqrt(2.0) * xi * out[0]
    for n in range(1, count - 1):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * xi * out[n] - np.sqrt(n / (n + 1)) * out[n - 1]
    return out / np.sqrt(scale)


def double_gaussian_parameters(sigma_plus: float, sigma_minus: float) -> tuple[float, float]:
    """
    (mu, scale) of exp(-(x+y)^2/(4 s+^2) - (x-y)^2/(4 s-^2)).

    mu = (s+ - s-)/(s+ + s-), mode width sqrt(s+ s-).
    """
    mu = (sigma_plus - sigma_minus) / (sigma_plus + sigma_minus)
    return mu, float(np.sqrt(sigma_plus * sigma_minus))


def analytic_gaussian_basis(
    mu: float,
    count: int,
    grid: Grid1D,
    scale: float = 1.0,
) -> ModeFamily:
    """Coefficients sqrt(1 - mu^2) mu^q with Hermite-Gauss modes centred on the grid centre"""
    if not 0.0 <= mu < 1.0:
        raise DomainError("Double-Gaussian parameter must satisfy 0 <= mu < 1", details={"mu": mu})

    count = 1 if mu == 0.0 else count
    coefficients = np.sqrt(1.0 - mu**2) * mu ** np.arange(count)
    modes = hermite_functions(grid.axis - grid.center, scale, count).astype(complex)
    return ModeFamily(
        coefficients=coefficients,
        signal_modes=modes,
        idler_modes=modes.copy(),
        grid=grid,
        retained_mass=float(np.sum(coefficients**2)),
    )


def azimuthal_family(coefficients: AzimuthalCoefficients, truncation_mass: float | None = None) -> AzimuthalFamily:
    """lambda_m^az = sqrt(c_m / sum_{m in [-M, M]} c_m)"""
    total = float(np.sum(coefficients.multiplicity * coefficients.coefficients))
    values = np.sqrt(coefficients.coefficients / total)
    multiplicity = coefficients.multiplicity

    if truncation_mass is not None:
        # c_m decreases with |m|, so truncation keeps a leading block
        cumulative = np.cumsum(multiplicity * values**2)
        count = min(int(np.searchsorted(cumulative, 1.0 - truncation_mass) + 1), values.size)
        values, multiplicity = values[:count], multiplicity[:count]

    return AzimuthalFamily(coefficients=values, multiplicity=multiplicity)
