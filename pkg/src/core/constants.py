"""
Simulator constants - centralized to avoid magic numbers
"""
from enum import Enum

import numpy as np
from scipy import constants as _codata

# Physical constants (CODATA via scipy)
SPEED_OF_LIGHT = _codata.c
HBAR = _codata.hbar

# Symmetric-ordering vacuum amplitude
VACUUM_AMPLITUDE = np.sqrt(0.5)


class Polarization(str, Enum):
    ORDINARY = "ordinary"
    EXTRAORDINARY = "extraordinary"


# Sellmeier form n^2 = A + B/(lambda^2 - C) - D*lambda^2, lambda in micrometres.
# BBO, standard published set.
BBO_ORDINARY = (2.7405, 0.0184, 0.0179, 0.0155)
BBO_EXTRAORDINARY = (2.3730, 0.0128, 0.0156, 0.0044)
SELLMEIER_BAND_M = (0.3e-6, 1.1e-6)

# Phase-matching angle search bracket
PHASEMATCHING_BRACKET_DEG = (20.0, 50.0)

# Gaussian with the same FWHM as sinc(x): exp(-SINC_GAUSS_EQUIVALENT * x**2)
SINC_GAUSS_EQUIVALENT = 0.1929

# Azimuthal Fourier series
AZIMUTHAL_START_ORDER = 64
AZIMUTHAL_OVERSAMPLING = 16

# Triplet storage keeps m >= 0; m > 0 stands for the +m and -m pair
AZIMUTHAL_PAIR_MULTIPLICITY = 2

# Observables
TEMPORAL_PADDING = 4
LAMBDA_BINS_PER_DECADE = 64
AZIMUTHAL_PROFILE_POINTS = 512
AZIMUTHAL_PROFILE_SPAN = 40.0
MULTIMODAL_SHOULDER_RATIO = 0.45

# Sweep
DEFAULT_POWER_MIN_W = 1e-7
DEFAULT_POWER_MAX_W = 10.0
DEFAULT_POWER_POINTS = 61
MIN_THRESHOLD_RECORDS = 5

# Calibration anchor: 8 % conversion at 0.2 W
DEFAULT_CALIBRATION_POWER_W = 0.2
DEFAULT_CALIBRATION_CONVERSION = 0.08
CALIBRATION_START_PHASE = 1e-3
CALIBRATION_MAX_DOUBLINGS = 200

# Scenario defaults
DEFAULT_PUMP_WAVELENGTH_M = 349e-9
DEFAULT_REPETITION_RATE_HZ = 400.0
DEFAULT_PUMP_WAIST_M = 1e-3
DEFAULT_PUMP_FWHM_M = 1e-9
DEFAULT_CRYSTAL_LENGTH_M = 4e-3
DEFAULT_EXTERNAL_ANGLE_DEG = 8.45

# Output
CSV_FLOAT_FORMAT = "%.12e"
TRIPLET_DUMP_ROWS = 10_000


class ThresholdObservable(str, Enum):
    K_DIM_MINIMA = "k_dim_minima"
    CROSS_WIDTH_MAXIMA = "cross_width_maxima"


class ScanParameter(str, Enum):
    SPECTRAL_FWHM = "spectral_fwhm_m"
    WAIST = "waist_m"
    CHIRP = "chirp"


class Subcommand(str, Enum):
    SWEEP = "sweep"
    SPECTRUM = "spectrum"
    MODES = "modes"
    ORACLE = "oracle"
    CALIBRATE = "calibrate"
