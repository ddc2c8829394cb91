# src/services/oracles/fock.py
"""
Exact trilinear dynamics in a truncated Fock space.

The generator K (a_p a_s^+ a_i^+ - h.c.) keeps n_s - n_i and
n_p + n_s fixed, so a pump Fock component |n, 0, 0> only explores the
ladder |n - k, k, k>, k = 0..n. Each ladder is a real antisymmetric
tridiagonal system; the state is labelled by explicit (n_p, n_s, n_i).
"""
import numpy as np
from scipy import integrate, sparse, stats

from src.core.config import settings
from src.core.exception import CutoffError, NumericalError
from src.core.logging import logger
from src.models.oracles import FockConfig, FockTrajectory

NORM_DRIFT_TOLERANCE = 1e-8


def ladder_labels(n: int) -> np.ndarray:
    """(n_p, n_s, n_i) labels reached from |n, 0, 0> by repeated a_p a_s^+ a_i^+"""
    labels = [(n, 0, 0)]
    while labels[-1][0] > 0:
        p, s, i = labels[-1]
        labels.append((p - 1, s + 1, i + 1))
    return np.array(labels, dtype=np.int64)


def _block(labels: np.ndarray, coupling: float) -> sparse.csr_matrix:
    """<p-1, s+1, i+1| K a_p a_s^+ a_i^+ |p, s, i> along the ladder, minus its transpose"""
    size = labels.shape[0]
    if size == 1:
        return sparse.csr_matrix((1, 1))
    p, s, i = labels[:-1].T
    rates = coupling * np.sqrt(p * (s + 1.0) * (i + 1.0))
    lower = sparse.diags(rates, -1, shape=(size, size))
    return (lower - lower.T).tocsr()


def coherent_amplitudes(alpha: float, cutoff: int) -> np.ndarray:
    """Real coherent-state amplitudes c_n, n = 0..cutoff, renormalized"""
    n = np.arange(cutoff + 1)
    weights = stats.poisson.pmf(n, alpha**2)
    return np.sqrt(weights / weights.sum())


def fock_trilinear(config: FockConfig) -> FockTrajectory:
    """Pump, signal and idler photon-number expectations and variances along z"""
    tail = float(stats.poisson.sf(config.cutoff, config.alpha**2))
    if tail > settings.FOCK_TAIL_TOLERANCE:
        raise CutoffError(
            "Coherent-state tail beyond the Fock cutoff too large",
            details={"tail_mass": tail, "cutoff": config.cutoff, "alpha": config.alpha},
        )

    ladders = [ladder_labels(n) for n in range(config.cutoff + 1)]
    generator = sparse.block_diag([_block(labels, config.coupling) for labels in ladders], format="csr")
    labels = np.concatenate(ladders)
    pump_count, signal_count, idler_count = (labels[:, column].astype(float) for column in range(3))

    amplitudes = coherent_amplitudes(config.alpha, config.cutoff)
    offsets = np.concatenate([[0], np.cumsum([ladder.shape[0] for ladder in ladders])])
    state0 = np.zeros(generator.shape[0])
    state0[offsets[:-1]] = amplitudes

    solution = integrate.solve_ivp(
        lambda _z, psi: generator @ psi,
        (0.0, float(config.z_grid[-1])),
        state0,
        method="DOP853",
        t_eval=config.z_grid,
        rtol=1e-10,
        atol=1e-12,
    )
    if not solution.success:
        raise NumericalError("Fock state integration failed", details={"message": solution.message})

    probabilities = solution.y**2
    norm = probabilities.sum(axis=0)
    drift = float(np.max(np.abs(norm - 1.0)))
    if drift > NORM_DRIFT_TOLERANCE:
        raise NumericalError("Fock state norm drifted", details={"drift": drift})

    pump = pump_count @ probabilities
    signal = signal_count @ probabilities
    idler = idler_count @ probabilities
    logger.debug(f"Fock oracle: dimension {generator.shape[0]}, norm drift {drift:.1e}")
    return FockTrajectory(
        z=config.z_grid,
        pump_number=pump,
        signal_number=signal,
        idler_number=idler,
        pump_variance=pump_count**2 @ probabilities - pump**2,
        signal_variance=signal_count**2 @ probabilities - signal**2,
        norm=norm,
    )
