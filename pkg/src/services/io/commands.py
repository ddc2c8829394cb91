# src/services/io/commands.py
"""
Subcommand dispatch: sweep, spectrum, modes, oracle, calibrate
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from src.core.constants import (
    MIN_THRESHOLD_RECORDS,
    TRIPLET_DUMP_ROWS,
    ScanParameter,
    Subcommand,
    ThresholdObservable,
)
from src.core.dependencies import get_executor, get_simulator, initialize_services, set_simulator
from src.core.exception import NumericalError
from src.core.logging import logger
from src.models.sweep import SweepPlan
from src.schemas.config import CalibrationAnchor, SourceConfig
from src.schemas.results import CalibrationResult
from src.services.io.writer import write_csv, write_json, write_records
from src.services.observables.populations import mode_population_histogram
from src.services.observables.spectral import (
    autocorrelation_slice,
    crosscorrelation_slice,
    normalized_crosscorrelation_slice,
    signal_spectrum,
)
from src.services.observables.temporal import temporal_slices
from src.services.observables.transverse import (
    azimuthal_crosscorrelation,
    radial_crosscorrelation_slice,
    ring_profile,
)
from src.services.oracles.suite import run_oracle_suite
from src.services.schmidt.triplets import leading_triplets
from src.services.simulator import TwinBeamSimulator
from src.services.sweep.calibration import calibrate_coupling
from src.services.sweep.engine import run_extended_length, run_parameter_scan, run_sweep
from src.services.sweep.thresholds import detect_thresholds


@dataclass
class RunOptions:
    """Command-line options shared by every subcommand"""
    out_dir: Path
    powers: list[float] = field(default_factory=list)
    threads: Optional[int] = None
    scan: Optional[ScanParameter] = None
    scan_values: list[float] = field(default_factory=list)


def _power_tag(power: float) -> str:
    return f"{power:.3e}".replace("+", "")


def _metadata(command: Subcommand, config: SourceConfig, **extra: Any) -> dict[str, Any]:
    return {"command": command.value, "config": config.audit(), **extra}


def _calibrate(simulator: TwinBeamSimulator, config: SourceConfig) -> CalibrationResult:
    anchor = config.coupling.calibration or CalibrationAnchor()
    return calibrate_coupling(simulator, anchor.power_w, anchor.conversion)


def _ensure_coupling(config: SourceConfig, options: RunOptions) -> TwinBeamSimulator:
    simulator = get_simulator()
    if simulator.coupling is None:
        result = _calibrate(simulator, config)
        write_json(options.out_dir / "coupling.json", result, _metadata(Subcommand.CALIBRATE, config))
        simulator = simulator.with_coupling(result.coupling)
        set_simulator(simulator)
    return simulator


def _thresholds(records) -> dict[str, Any]:
    if len(records) < MIN_THRESHOLD_RECORDS:
        return {}
    return {
        observable.value: detect_thresholds(records, observable).model_dump(mode="json")
        for observable in ThresholdObservable
    }


async def _sweep(config: SourceConfig, options: RunOptions) -> list[Path]:
    simulator = _ensure_coupling(config, options)
    plan = SweepPlan(
        powers=config.sweep.power_grid(),
        use_extended_length=config.crystal.extended_length_m is not None,
        threshold_observable=config.sweep.threshold_observable,
    )
    meta = _metadata(Subcommand.SWEEP, config, coupling=simulator.coupling)

    if options.scan is not None:
        results = await run_parameter_scan(
            config, simulator.coupling, options.scan, options.scan_values, plan, get_executor()
        )
        written = []
        for value, (records, _) in results.items():
            tag = f"{options.scan.value}_{_power_tag(value)}"
            scan_meta = {**meta, "scan": {options.scan.value: value}}
            written.append(write_records(options.out_dir / f"sweep_{tag}.csv", records, scan_meta))
            written.append(write_json(options.out_dir / f"thresholds_{tag}.json", _thresholds(records), scan_meta))
        return written

    if plan.use_extended_length:
        records = await run_extended_length(simulator, plan, get_executor())
    else:
        records = await run_sweep(simulator, plan, get_executor())

    return [
        write_records(options.out_dir / "sweep.csv", records, meta),
        write_json(options.out_dir / "thresholds.json", _thresholds(records), meta),
        write_json(options.out_dir / "sweep.json", [r.model_dump(mode="json") for r in records], meta),
    ]


def _requested_powers(config: SourceConfig, options: RunOptions) -> list[float]:
    return options.powers or list(config.output.spectrum_powers_w)


async def _spectrum(config: SourceConfig, options: RunOptions) -> list[Path]:
    simulator = _ensure_coupling(config, options)
    written = []
    for power in _requested_powers(config, options):
        state = simulator.state_at(power)
        meta = _metadata(Subcommand.SPECTRUM, config, coupling=simulator.coupling, power_w=power)
        tag = _power_tag(power)

        spectrum = signal_spectrum(state)
        written.append(
            write_csv(
                options.out_dir / f"spectral_{tag}.csv",
                {
                    "omega_rad_s": spectrum.axis,
                    "spectrum": spectrum.values,
                    "cross_slice": crosscorrelation_slice(state).values,
                    "auto_slice": autocorrelation_slice(state).values,
                    "cross_normalized": normalized_crosscorrelation_slice(state).values,
                },
                meta,
            )
        )

        auto_t, cross_t, pulse = temporal_slices(state)
        written.append(
            write_csv(
                options.out_dir / f"temporal_{tag}.csv",
                {"t_s": pulse.axis, "pulse": pulse.values, "cross_slice": cross_t.values, "auto_slice": auto_t.values},
                meta,
            )
        )

        ring = ring_profile(state)
        written.append(
            write_csv(
                options.out_dir / f"radial_{tag}.csv",
                {"dk_rad_m": ring.axis, "ring": ring.values, "cross_slice": radial_crosscorrelation_slice(state).values},
                meta,
            )
        )

        azimuthal = azimuthal_crosscorrelation(state)
        written.append(
            write_csv(
                options.out_dir / f"azimuthal_{tag}.csv",
                {"dphi_rad": azimuthal.axis, "cross": azimuthal.values},
                meta,
            )
        )
    return written


async def _modes(config: SourceConfig, options: RunOptions) -> list[Path]:
    simulator = _ensure_coupling(config, options)
    basis = simulator.basis
    table = simulator.table
    leading = leading_triplets(table, TRIPLET_DUMP_ROWS)
    meta = _metadata(Subcommand.MODES, config, coupling=simulator.coupling)

    written = [
        write_csv(
            options.out_dir / "schmidt_spectral.csv",
            {"q": np.arange(basis.spectral.size), "lambda": basis.spectral.coefficients},
            meta,
        ),
        write_csv(
            options.out_dir / "schmidt_radial.csv",
            {"l": np.arange(basis.radial.size), "lambda": basis.radial.coefficients},
            meta,
        ),
        write_csv(
            options.out_dir / "schmidt_azimuthal.csv",
            {
                "m": np.arange(basis.azimuthal.size),
                "multiplicity": basis.azimuthal.multiplicity.astype(int),
                "lambda": basis.azimuthal.coefficients,
            },
            meta,
        ),
        write_csv(
            options.out_dir / "triplets.csv",
            {
                "m": leading.m,
                "l": leading.l,
                "q": leading.q,
                "multiplicity": leading.multiplicity.astype(int),
                "lambda": leading.coefficients,
                "weighted_lambda_sq": leading.multiplicity * leading.coefficients**2,
            },
            {**meta, "rows": leading.size, "retained_entries": table.size},
        ),
        write_json(
            options.out_dir / "modes.json",
            {
                "schmidt_numbers": basis.family_schmidt_numbers(),
                "triplet_schmidt_number": table.schmidt_number(),
                "retained_mass": table.retained_mass,
                "lambda_min": table.lambda_min,
                "entries": table.size,
                "triplets": table.count,
                "listed_entries": leading.size,
            },
            meta,
        ),
    ]

    for power in _requested_powers(config, options):
        histogram = mode_population_histogram(simulator.state_at(power))
        tag = _power_tag(power)
        power_meta = {**meta, "power_w": power}
        written.append(
            write_csv(
                options.out_dir / f"populations_{tag}.csv",
                {
                    "lambda": histogram.coefficients,
                    "photon_number": histogram.photon_numbers,
                },
                power_meta,
            )
        )
        written.append(
            write_csv(
                options.out_dir / f"density_{tag}.csv",
                {
                    "lambda_low": histogram.bin_edges[:-1],
                    "lambda_high": histogram.bin_edges[1:],
                    "count": histogram.counts,
                },
                power_meta,
            )
        )
    return written


async def _oracle(config: SourceConfig, options: RunOptions) -> list[Path]:
    report, artifacts = run_oracle_suite()
    meta = _metadata(Subcommand.ORACLE, config)
    classical = artifacts.classical
    fock = artifacts.fock

    written = [
        write_csv(
            options.out_dir / "oracle_classical.csv",
            {"z_m": classical.z, "pump": classical.pump, "signal": classical.signal, "u": classical.u, "v": classical.v},
            meta,
        ),
        write_csv(
            options.out_dir / "oracle_fock.csv",
            {
                "z_m": fock.z,
                "pump_number": fock.pump_number,
                "signal_number": fock.signal_number,
                "idler_number": fock.idler_number,
                "pump_variance": fock.pump_variance,
                "signal_variance": fock.signal_variance,
                "approximate_signal_number": artifacts.approximate_signal_number,
            },
            meta,
        ),
        write_json(
            options.out_dir / "oracle_report.json",
            {**report.model_dump(mode="json"), "passed": report.passed},
            meta,
        ),
    ]
    if not report.passed:
        failed = [c.name for c in report.checks if c.gated and not c.passed]
        raise NumericalError(f"Oracle comparisons failed: {', '.join(failed)}", details={"failed": failed})
    return written


async def _calibrate_command(config: SourceConfig, options: RunOptions) -> list[Path]:
    result = _calibrate(get_simulator(), config)
    return [write_json(options.out_dir / "coupling.json", result, _metadata(Subcommand.CALIBRATE, config))]


_HANDLERS = {
    Subcommand.SWEEP: _sweep,
    Subcommand.SPECTRUM: _spectrum,
    Subcommand.MODES: _modes,
    Subcommand.ORACLE: _oracle,
    Subcommand.CALIBRATE: _calibrate_command,
}


async def run_subcommand(command: Subcommand, config: SourceConfig, options: RunOptions) -> list[Path]:
    """
    Run one subcommand and return the files it wrote.

    Every subcommand but `oracle` builds the scenario's mode structure first.
    """
    command = Subcommand(command)
    if command != Subcommand.ORACLE:
        await initialize_services(config, options.threads)

    written = await _HANDLERS[command](config, options)
    logger.info(f"✅ {command.value}: wrote {len(written)} files to {options.out_dir}")
    return written
