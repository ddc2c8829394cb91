# src/services/observables/widths.py
"""
FWHM extraction and Fedorov ratios
"""
import numpy as np
from scipy import signal

from src.core.constants import MULTIMODAL_SHOULDER_RATIO
from src.core.exception import DomainError
from src.models.state import Profile1D, WidthReport


def _interpolate(axis: np.ndarray, values: np.ndarray, i: int, j: int, level: float) -> float:
    x0, x1 = axis[i], axis[j]
    y0, y1 = values[i], values[j]
    if y1 == y0:
        return float(x0)
    return float(x0 + (level - y0) * (x1 - x0) / (y1 - y0))


def _outer_crossings(
    axis: np.ndarray,
    values: np.ndarray,
    level: float,
) -> tuple[float, float, int, int, bool]:
    above = np.flatnonzero(values >= level)
    first, last = int(above[0]), int(above[-1])
    truncated = False

    if first == 0:
        left, truncated = float(axis[0]), True
    else:
        left = _interpolate(axis, values, first - 1, first, level)

    if last == values.size - 1:
        right, truncated = float(axis[-1]), True
    else:
        right = _interpolate(axis, values, last, last + 1, level)

    return left, right, first, last, truncated


def fwhm(profile: Profile1D) -> WidthReport:
    """
    Full width at half maximum, outermost half-height crossings.

    The multimodality flag is raised when the half-height level is
    crossed more than twice, when several peaks rise above it, or when
    the profile's top is a narrow peak riding on a broader one.
    """
    axis = np.asarray(profile.axis, dtype=float)
    values = np.asarray(profile.values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise DomainError("Profile contains non-finite values", details={"label": profile.label})

    peak_value = float(np.max(values))
    if peak_value <= 0:
        raise DomainError("Profile is identically zero", details={"label": profile.label})

    half = 0.5 * peak_value
    left, right, first, last, truncated = _outer_crossings(axis, values, half)

    above = values >= half
    crossings = int(np.count_nonzero(np.diff(above.astype(np.int8))))
    peaks, _ = signal.find_peaks(values, height=half)

    width = right - left
    shoulder_left, shoulder_right, *_ = _outer_crossings(axis, values, 0.75 * peak_value)
    narrow_top = width > 0 and (shoulder_right - shoulder_left) < MULTIMODAL_SHOULDER_RATIO * width

    return WidthReport(
        width=float(width),
        left=left,
        right=right,
        bracket=(first, last),
        multimodal=bool(crossings > 2 or len(peaks) > 1 or narrow_top),
        truncated=truncated,
        unit=profile.unit,
    )


def fedorov_ratio(marginal_width: WidthReport, conditional_width: WidthReport) -> float:
    """K^Delta = marginal FWHM / conditional FWHM"""
    if conditional_width.width <= 0:
        raise DomainError(
            "Conditional width must be positive",
            details={"conditional_width": conditional_width.width},
        )
    return marginal_width.width / conditional_width.width
