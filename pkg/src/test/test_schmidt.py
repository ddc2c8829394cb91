# src/test/test_schmidt.py
"""
Schmidt decomposition backends and the triplet table
"""
import numpy as np
import pytest

from src.core.exception import ConfigurationError, DomainError, NumericalError
from src.models.kernels import AzimuthalCoefficients, Grid1D, Kernel2D
from src.services.schmidt.decomposition import (
    analytic_gaussian_basis,
    azimuthal_family,
    decompose_kernel,
    double_gaussian_parameters,
    hermite_functions,
    svd_schmidt,
)
from src.services.schmidt.triplets import assemble_triplets, leading_triplets

from src.test.conftest import SIGNAL_FREQUENCY, azimuthal_gaussian, gaussian_basis, single_azimuthal


@pytest.fixture
def double_gaussian():
    grid = Grid1D.from_half_span(0.0, 8.0, 256)
    x, y = np.meshgrid(grid.axis, grid.axis, indexing="ij")
    values = np.exp(-((x + y) ** 2) / 4.0 - (x - y) ** 2 / (4.0 * 0.25))
    return Kernel2D(grid=grid, values=values.astype(complex))


def _inner(f: np.ndarray, g: np.ndarray, step: float) -> np.ndarray:
    return (f.conj() @ g.T) * step


def test_svd_matches_closed_form_coefficients(double_gaussian):
    mu, scale = double_gaussian_parameters(1.0, 0.5)
    assert mu == pytest.approx(1.0 / 3.0)
    assert scale == pytest.approx(np.sqrt(0.5))

    family = decompose_kernel(double_gaussian)
    expected = np.sqrt(1.0 - mu**2) * mu ** np.arange(8)
    np.testing.assert_allclose(family.coefficients[:8], expected, atol=1e-6)


def test_svd_leading_mode_is_hermite_gauss(double_gaussian):
    _, scale = double_gaussian_parameters(1.0, 0.5)
    family = decompose_kernel(double_gaussian)
    hermite = hermite_functions(double_gaussian.grid.axis, scale, 3)
    overlaps = np.abs(_inner(family.signal_modes[:3], hermite, family.weight))
    np.testing.assert_allclose(np.diag(overlaps), 1.0, atol=1e-6)


def test_svd_modes_are_orthonormal_and_reconstruct(double_gaussian):
    step = double_gaussian.grid.step
    coefficients, left, right = svd_schmidt(double_gaussian.values, (step, step))

    np.testing.assert_allclose(_inner(left, left, step), np.eye(left.shape[0]), atol=1e-10)
    np.testing.assert_allclose(_inner(right, right, step), np.eye(right.shape[0]), atol=1e-10)
    assert np.sum(coefficients**2) == pytest.approx(1.0, rel=1e-12)
    assert np.all(np.diff(coefficients) <= 0)

    norm = np.sqrt(np.sum(np.abs(double_gaussian.values) ** 2) * step * step)
    rebuilt = norm * np.einsum("q,qi,qj->ij", coefficients, left, right)
    np.testing.assert_allclose(rebuilt, double_gaussian.values, atol=1e-10)


def test_svd_fixes_mode_phases(double_gaussian):
    _, left, _ = svd_schmidt(double_gaussian.values * np.exp(0.7j), (0.0625, 0.0625))
    for row in left[:5]:
        magnitude = np.abs(row)
        first = row[np.argmax(magnitude > 1e-8 * magnitude.max())]
        assert first.imag == pytest.approx(0.0, abs=1e-12)
        assert first.real > 0


def test_svd_rejects_bad_input():
    with pytest.raises(DomainError):
        svd_schmidt(np.zeros((4, 4)), (1.0, 1.0))
    with pytest.raises(DomainError):
        svd_schmidt(np.eye(4), (0.0, 1.0))
    with pytest.raises(NumericalError):
        svd_schmidt(np.full((4, 4), np.nan), (1.0, 1.0))


def test_hermite_functions_are_orthonormal():
    grid = Grid1D.from_half_span(0.0, 20.0, 1024)
    modes = hermite_functions(grid.axis, 2.0, 12)
    np.testing.assert_allclose(_inner(modes, modes, grid.step), np.eye(12), atol=1e-10)


def test_analytic_basis_parameter_range():
    grid = Grid1D.from_half_span(0.0, 8.0, 64)
    with pytest.raises(DomainError):
        analytic_gaussian_basis(1.0, 5, grid)
    single = analytic_gaussian_basis(0.0, 5, grid)
    assert single.size == 1
    assert single.coefficients[0] == pytest.approx(1.0)
    assert single.schmidt_number() == pytest.approx(1.0)


def test_analytic_modes_follow_an_offset_grid():
    grid = Grid1D.from_half_span(SIGNAL_FREQUENCY, 3.2e13, 256)
    family = analytic_gaussian_basis(0.5, 6, grid, scale=2e12)
    np.testing.assert_allclose(_inner(family.signal_modes, family.signal_modes, grid.step), np.eye(6), atol=1e-8)
    # The fundamental mode peaks at the grid centre
    assert int(np.argmax(np.abs(family.signal_modes[0]))) == grid.center_index


def test_gaussian_schmidt_number_is_closed_form():
    grid = Grid1D.from_half_span(0.0, 8.0, 64)
    family = analytic_gaussian_basis(0.5, 80, grid)
    assert family.schmidt_number() == pytest.approx((1 + 0.25) / (1 - 0.25), rel=1e-9)


def test_family_truncation_keeps_leading_mass():
    grid = Grid1D.from_half_span(0.0, 8.0, 64)
    family = analytic_gaussian_basis(0.5, 30, grid).truncated(1e-3)
    # 1 - mu^(2n) >= 1 - 1e-3 first holds at n = 5
    assert family.size == 5
    assert family.retained_mass >= 1.0 - 1e-3


def test_azimuthal_family_is_normalized():
    coefficients = np.exp(-(np.arange(20) ** 2) / 18.0)
    family = azimuthal_family(AzimuthalCoefficients(coefficients=coefficients, order=19))
    assert np.sum(family.multiplicity * family.coefficients**2) == pytest.approx(1.0, rel=1e-12)

    truncated = azimuthal_family(AzimuthalCoefficients(coefficients=coefficients, order=19), 1e-3)
    assert truncated.size < family.size
    assert np.sum(truncated.multiplicity * truncated.coefficients**2) >= 1.0 - 1e-3


def _dense_triplets(basis):
    lam = (
        basis.azimuthal.coefficients[:, None, None]
        * basis.radial.coefficients[None, :, None]
        * basis.spectral.coefficients[None, None, :]
    )
    multiplicity = np.broadcast_to(basis.azimuthal.multiplicity[:, None, None], lam.shape)
    return lam.ravel(), multiplicity.ravel()


def test_triplet_table_mass_and_ordering():
    basis = gaussian_basis(n_omega=64, n_k=32)
    table = assemble_triplets(basis.spectral, basis.radial, basis.azimuthal, xi=2.0, truncation_mass=1e-3)
    entries = leading_triplets(table)

    assert entries.size == table.size
    assert np.all(np.diff(entries.coefficients) <= 0)
    assert table.retained_mass >= 1.0 - 1e-3
    assert table.lambda_min == pytest.approx(entries.coefficients[-1])
    assert table.largest == pytest.approx(entries.coefficients[0])

    expected = (
        basis.azimuthal.coefficients[entries.m]
        * basis.radial.coefficients[entries.l]
        * basis.spectral.coefficients[entries.q]
    )
    np.testing.assert_allclose(entries.coefficients, expected)
    assert table.count == int(entries.multiplicity.sum())


def test_triplet_table_is_the_smallest_leading_set():
    basis = gaussian_basis(n_omega=64, n_k=32)
    table = assemble_triplets(basis.spectral, basis.radial, basis.azimuthal, xi=1.0, truncation_mass=1e-3)
    lam, multiplicity = _dense_triplets(basis)

    kept = lam >= table.lambda_min
    assert np.count_nonzero(kept) == table.size
    assert np.sum(multiplicity[kept] * lam[kept] ** 2) == pytest.approx(table.retained_mass, rel=1e-12)
    tighter = lam > table.lambda_min
    assert np.sum(multiplicity[tighter] * lam[tighter] ** 2) < 1.0 - 1e-3


def test_single_mode_families_give_one_triplet():
    basis = gaussian_basis(spectral_mu=0.0, radial_mu=0.0, azimuthal=single_azimuthal(), n_omega=32, n_k=16)
    table = assemble_triplets(basis.spectral, basis.radial, basis.azimuthal, xi=3.0)
    assert table.size == table.count == 1
    assert table.lambda_min == pytest.approx(1.0)
    assert table.retained_mass == pytest.approx(1.0)


def test_triplet_blocks_cover_the_table():
    basis = gaussian_basis(n_omega=64, n_k=32)
    table = assemble_triplets(basis.spectral, basis.radial, basis.azimuthal, xi=1.0, truncation_mass=1e-6)

    for block_entries in (1, 500, 10**7):
        blocks = list(table.blocks(block_entries))
        assert sum(int(block.mask.sum()) for block in blocks) == table.size
        assert blocks[-1].stop == table.highest_order + 1
        coefficients = np.concatenate([block.coefficients[block.mask] for block in blocks])
        assert coefficients.min() == pytest.approx(table.lambda_min)
        assert all(np.all(block.coefficients[~block.mask] == 0.0) for block in blocks)


def test_leading_triplets_are_a_prefix():
    basis = gaussian_basis(n_omega=64, n_k=32)
    table = assemble_triplets(basis.spectral, basis.radial, basis.azimuthal, xi=1.0, truncation_mass=1e-4)
    everything = leading_triplets(table)
    leading = leading_triplets(table, 7)
    assert leading.size == 7
    np.testing.assert_allclose(leading.coefficients, everything.coefficients[:7])


def test_triplet_table_rescales_with_xi():
    basis = gaussian_basis(n_omega=64, n_k=32)
    table = assemble_triplets(basis.spectral, basis.radial, basis.azimuthal, xi=0.0)
    scaled = table.with_xi(5.0)
    assert scaled.xi == 5.0
    assert scaled.size == table.size
    np.testing.assert_array_equal(scaled.spectral_counts, table.spectral_counts)


def test_triplet_budgets():
    basis = gaussian_basis(n_omega=64, n_k=32)
    with pytest.raises(ConfigurationError):
        assemble_triplets(basis.spectral, basis.radial, basis.azimuthal, xi=1.0, truncation_mass=1e-3, max_triplets=3)

    short = gaussian_basis(n_omega=64, n_k=32, spectral_count=2)
    with pytest.raises(ConfigurationError):
        assemble_triplets(short.spectral, short.radial, short.azimuthal, xi=1.0, truncation_mass=1e-6)


def test_triplet_schmidt_number_factorizes():
    basis = gaussian_basis(n_omega=64, n_k=32, azimuthal=azimuthal_gaussian(2.0, 10))
    table = assemble_triplets(basis.spectral, basis.radial, basis.azimuthal, xi=1.0, truncation_mass=1e-10)
    product = np.prod(list(basis.family_schmidt_numbers().values()))
    assert table.schmidt_number() == pytest.approx(product, rel=1e-6)
