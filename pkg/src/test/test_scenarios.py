# src/test/test_scenarios.py
"""
Default-grid scenarios: calibrated sweeps, threshold structure,
extended-length scaling and output determinism.

Every test here builds full-size mode structures; run with `-m slow`.
"""
import asyncio
import os
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from src.core.constants import ThresholdObservable
from src.main import main
from src.models.sweep import SweepPlan
from src.schemas.config import CrystalSection, SourceConfig
from src.services.simulator import TwinBeamSimulator
from src.services.sweep.calibration import calibrate_coupling
from src.services.sweep.engine import run_extended_length, run_sweep
from src.services.sweep.thresholds import detect_thresholds

pytestmark = pytest.mark.slow

# Runtime allowance for build, calibration and sweep of one default scenario
DEFAULT_RUN_SECONDS = 600.0


async def _calibrated_sweep(config: SourceConfig) -> tuple[TwinBeamSimulator, list, float, float]:
    start = time.perf_counter()
    with ThreadPoolExecutor(max_workers=os.cpu_count()) as pool:
        simulator = TwinBeamSimulator(config)
        await simulator.initialize(pool)
        anchor = config.coupling.calibration
        result = calibrate_coupling(simulator, anchor.power_w, anchor.conversion)
        simulator = simulator.with_coupling(result.coupling)
        records = await run_sweep(simulator, SweepPlan(powers=config.sweep.power_grid()), pool)
    return simulator, records, result.achieved_conversion, time.perf_counter() - start


@pytest.fixture(scope="module")
def default_run():
    return asyncio.run(_calibrated_sweep(SourceConfig()))


@pytest.fixture(scope="module")
def narrow_run():
    config = SourceConfig(name="narrow", pump={"spectral_fwhm_m": 3e-10})
    return asyncio.run(_calibrated_sweep(config))


def _series(records, field: str) -> np.ndarray:
    return np.array([getattr(r, field) for r in records])


# ==================== DEFAULT SCENARIO ====================


def test_default_run_is_calibrated_within_budget(default_run):
    _, records, achieved, elapsed = default_run
    assert achieved == pytest.approx(0.08, rel=1e-3)
    assert elapsed < DEFAULT_RUN_SECONDS
    assert len(records) == 61
    assert np.all(np.diff(_series(records, "power_w")) > 0)


def test_default_photon_number_turns_linear(default_run):
    _, records, _, _ = default_run
    powers = _series(records, "power_w")
    photons = _series(records, "photon_number")
    assert np.all(np.diff(photons) > 0)
    slopes = np.diff(np.log(photons)) / np.diff(np.log(powers))
    assert slopes[-1] == pytest.approx(1.0, abs=0.3)
    assert slopes[-1] < slopes[len(slopes) // 2]


def test_default_thresholds_agree(default_run):
    _, records, _, _ = default_run
    k_dim = detect_thresholds(records, ThresholdObservable.K_DIM_MINIMA)
    cross = detect_thresholds(records, ThresholdObservable.CROSS_WIDTH_MAXIMA)
    assert k_dim.indices and cross.indices
    assert abs(k_dim.indices[0] - cross.indices[0]) <= 1

    spectrum = _series(records, "spectrum_fwhm")
    assert abs(int(np.argmin(spectrum)) - cross.indices[0]) <= 1


def test_azimuthal_correlation_is_wider_than_radial(default_run):
    simulator, records, _, _ = default_run
    # Azimuthal width as an arc length on the ring in the transverse wave-vector plane
    arc = _series(records, "cross_azimuthal_fwhm") * simulator.geometry.ring_radius
    assert np.all(arc > _series(records, "cross_radial_fwhm"))


# ==================== NARROW PUMP ====================


def test_narrow_pump_shows_several_maxima(narrow_run):
    _, records, _, _ = narrow_run
    report = detect_thresholds(records, ThresholdObservable.CROSS_WIDTH_MAXIMA)
    assert len(report.powers_w) >= 2
    assert 3.0 <= report.p_th1 / report.p_th <= 50.0
    assert 4e-2 / 3.0 <= report.p_th <= 4e-2 * 3.0
    assert 6.1e-1 / 3.0 <= report.p_th1 <= 6.1e-1 * 3.0


def test_narrow_pump_auto_correlation_is_shorter_than_cross(narrow_run):
    _, records, _, _ = narrow_run
    weak = records[0]
    assert weak.auto_temporal_fwhm < weak.cross_temporal_fwhm


# ==================== EXTENDED LENGTH ====================


def test_doubled_length_lowers_threshold_fourfold(default_run):
    simulator, records, _, _ = default_run
    config = simulator.config.model_copy(
        update={"crystal": CrystalSection(length_m=4e-3, extended_length_m=8e-3)}
    )
    crystal = config.to_crystal(simulator.crystal.cut_angle)
    longer = TwinBeamSimulator.from_basis(config, crystal, simulator.geometry, simulator.basis, simulator.coupling)
    extended = asyncio.run(run_extended_length(longer, SweepPlan(powers=config.sweep.power_grid())))

    plain = detect_thresholds(records, ThresholdObservable.CROSS_WIDTH_MAXIMA)
    doubled = detect_thresholds(extended, ThresholdObservable.CROSS_WIDTH_MAXIMA)
    assert plain.p_th / doubled.p_th == pytest.approx(4.0, rel=0.3)

    widest = _series(records, "cross_spectral_fwhm").max()
    assert _series(extended, "cross_spectral_fwhm").max() == pytest.approx(widest, rel=0.1)


# ==================== DETERMINISM ====================


def test_sweep_csv_is_identical_across_thread_counts(tmp_path):
    # Reduced grids keep three full sweeps affordable
    config = tmp_path / "scenario.yaml"
    config.write_text(
        "name: small\npump:\n  waist_m: 5.0e-5\ngrid:\n  n_omega: 64\n  n_k: 48\ncoupling:\n  constant: 1.0e-7\n",
        encoding="utf-8",
    )
    outputs = []
    for run, threads in enumerate(("1", "1", "8")):
        out = tmp_path / f"run{run}"
        assert main(["sweep", "--config", str(config), "--out", str(out), "--threads", threads]) == 0
        outputs.append((out / "sweep.csv").read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]
