# src/services/sweep/engine.py
"""
Power sweeps over a fixed Schmidt basis, the extended-length model and
pump-parameter scans
"""
import asyncio
import time
from concurrent.futures import Executor
from typing import Optional

from src.core.constants import ScanParameter
from src.core.exception import BaseAppException, ConfigurationError, SweepError
from src.core.logging import logger
from src.models.state import TwinBeamState, WidthReport
from src.models.sweep import SweepPlan
from src.schemas.config import SourceConfig
from src.schemas.results import SweepRecord, ThresholdReport
from src.services.observables.spectral import (
    autocorrelation_slice,
    crosscorrelation_slice,
    entanglement_dimensionality,
    photon_number,
    signal_spectrum,
)
from src.services.observables.temporal import temporal_slices
from src.services.observables.transverse import (
    azimuthal_crosscorrelation,
    radial_crosscorrelation_slice,
    ring_profile,
)
from src.services.observables.widths import fedorov_ratio, fwhm
from src.services.simulator import TwinBeamSimulator
from src.services.sweep.thresholds import detect_thresholds

_SCAN_FIELDS = {
    ScanParameter.SPECTRAL_FWHM: "spectral_fwhm_m",
    ScanParameter.WAIST: "waist_m",
    ScanParameter.CHIRP: "chirp",
}


def evaluate_record(state: TwinBeamState) -> SweepRecord:
    """All sweep observables of one exit state"""
    widths: dict[str, WidthReport] = {
        "spectrum": fwhm(signal_spectrum(state)),
        "cross_spectral": fwhm(crosscorrelation_slice(state)),
        "auto_spectral": fwhm(autocorrelation_slice(state)),
        "ring": fwhm(ring_profile(state)),
        "cross_radial": fwhm(radial_crosscorrelation_slice(state)),
        "cross_azimuthal": fwhm(azimuthal_crosscorrelation(state)),
    }
    auto_t, cross_t, pulse = temporal_slices(state)
    widths["auto_temporal"] = fwhm(auto_t)
    widths["cross_temporal"] = fwhm(cross_t)
    widths["pulse"] = fwhm(pulse)

    dimensionality = entanglement_dimensionality(state)
    return SweepRecord(
        power_w=state.power,
        photon_number=photon_number(state),
        k_dim=dimensionality.value,
        k_dim_fallback=dimensionality.fallback,
        fedorov_spectral=fedorov_ratio(widths["spectrum"], widths["cross_spectral"]),
        fedorov_spatial=fedorov_ratio(widths["ring"], widths["cross_radial"]),
        spectrum_fwhm=widths["spectrum"].width,
        cross_spectral_fwhm=widths["cross_spectral"].width,
        auto_spectral_fwhm=widths["auto_spectral"].width,
        cross_temporal_fwhm=widths["cross_temporal"].width,
        auto_temporal_fwhm=widths["auto_temporal"].width,
        pulse_duration=widths["pulse"].width,
        ring_fwhm=widths["ring"].width,
        cross_radial_fwhm=widths["cross_radial"].width,
        cross_azimuthal_fwhm=widths["cross_azimuthal"].width,
        multimodal_spectrum=widths["spectrum"].multimodal,
        multimodal_cross_spectral=widths["cross_spectral"].multimodal,
        multimodal_auto_spectral=widths["auto_spectral"].multimodal,
        multimodal_cross_temporal=widths["cross_temporal"].multimodal,
        multimodal_auto_temporal=widths["auto_temporal"].multimodal,
        multimodal_transverse=any(
            widths[name].multimodal for name in ("ring", "cross_radial", "cross_azimuthal")
        ),
        truncated_profiles=sorted(name for name, report in widths.items() if report.truncated),
    )


def evaluate_point(simulator: TwinBeamSimulator, power: float, z_end: float) -> SweepRecord:
    """One sweep point; failures are re-raised naming the power"""
    try:
        return evaluate_record(simulator.state_at(power, z_end))
    except BaseAppException as e:
        raise SweepError(
            f"Sweep point failed at {power:.6e} W: {e.message}",
            details={"power_w": power, "cause": type(e).__name__, **e.details},
        ) from e


def _z_end(simulator: TwinBeamSimulator, plan: SweepPlan) -> float:
    crystal = simulator.crystal
    return crystal.interaction_length if plan.use_extended_length else crystal.length


async def run_sweep(
    simulator: TwinBeamSimulator,
    plan: SweepPlan,
    executor: Optional[Executor] = None,
) -> list[SweepRecord]:
    """
    Evaluate every power of the plan; records come back in plan order.

    Each point runs in a single worker, so results do not depend on the
    number of workers.
    """
    z_end = _z_end(simulator, plan)
    logger.info(f"🚀 Sweep over {plan.powers.size} powers, z_end = {z_end:.3e} m")
    start_time = time.time()

    loop = asyncio.get_running_loop()
    records = await asyncio.gather(
        *(
            loop.run_in_executor(executor, evaluate_point, simulator, float(power), z_end)
            for power in plan.powers
        )
    )

    logger.info(f"✅ Sweep finished in {time.time() - start_time:.2f}s")
    return list(records)


async def run_extended_length(
    simulator: TwinBeamSimulator,
    plan: SweepPlan,
    executor: Optional[Executor] = None,
) -> list[SweepRecord]:
    """Sweep with modes of length L and dynamics propagated over L_ext"""
    crystal = simulator.crystal
    if crystal.extended_length is None:
        raise ConfigurationError("Extended-length sweep needs crystal.extended_length_m")
    if crystal.extended_length < crystal.length:
        raise ConfigurationError(
            "Extended length shorter than the crystal",
            details={"length_m": crystal.length, "extended_length_m": crystal.extended_length},
        )
    extended = SweepPlan(
        powers=plan.powers,
        use_extended_length=True,
        threshold_observable=plan.threshold_observable,
    )
    return await run_sweep(simulator, extended, executor)


async def run_parameter_scan(
    config: SourceConfig,
    coupling: float,
    parameter: ScanParameter,
    values: list[float],
    plan: SweepPlan,
    executor: Optional[Executor] = None,
) -> dict[float, tuple[list[SweepRecord], ThresholdReport]]:
    """
    One sweep per pump-parameter value, each over its own basis.

    The coupling constant is a crystal property and is held fixed.
    """
    field = _SCAN_FIELDS[ScanParameter(parameter)]
    results: dict[float, tuple[list[SweepRecord], ThresholdReport]] = {}

    for value in values:
        logger.info(f"Scan {field} = {value:.4e}")
        pump = config.pump.model_copy(update={field: value})
        scenario = config.model_copy(update={"pump": pump, "name": f"{config.name}-{field}-{value:.4e}"})

        simulator = TwinBeamSimulator(scenario, coupling)
        await simulator.initialize(executor)
        records = await run_sweep(simulator, plan, executor)
        results[value] = (records, detect_thresholds(records, plan.threshold_observable))

    return results
