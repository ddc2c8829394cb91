# src/services/sweep/thresholds.py
"""
Threshold powers from interior extrema of a sweep series
"""
import numpy as np
from scipy import ndimage, signal

from src.core.constants import MIN_THRESHOLD_RECORDS, ThresholdObservable
from src.core.exception import SweepError
from src.core.logging import logger
from src.schemas.results import SweepRecord, ThresholdReport


def _series(records: list[SweepRecord], observable: ThresholdObservable) -> np.ndarray:
    if observable == ThresholdObservable.K_DIM_MINIMA:
        # minima become maxima
        return -np.array([r.k_dim for r in records])
    return np.array([r.cross_spectral_fwhm for r in records])


def detect_thresholds(
    records: list[SweepRecord],
    observable: ThresholdObservable = ThresholdObservable.CROSS_WIDTH_MAXIMA,
) -> ThresholdReport:
    """
    Interior extrema of a 3-point median-smoothed series, ranked by power.
    Extrema on the first two or last two points are dropped.

    An empty report means the series has no interior extremum.
    """
    observable = ThresholdObservable(observable)
    if len(records) < MIN_THRESHOLD_RECORDS:
        raise SweepError(
            "Threshold detection needs more sweep points",
            details={"records": len(records), "required": MIN_THRESHOLD_RECORDS},
        )

    smoothed = ndimage.median_filter(_series(records, observable), size=3, mode="nearest")
    peaks, _ = signal.find_peaks(smoothed)
    peaks = peaks[(peaks > 1) & (peaks < smoothed.size - 2)]
    powers = [records[i].power_w for i in peaks]

    logger.debug(f"Thresholds ({observable.value}): {[f'{p:.3e}' for p in powers]}")
    return ThresholdReport(observable=observable, powers_w=powers, indices=[int(i) for i in peaks])
