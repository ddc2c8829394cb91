# src/services/simulator.py
"""
Twin-beam simulator service.

Owns one scenario's power-independent mode structure (geometry,
kernels, Schmidt basis) and produces exit states for any pump power.
"""
import asyncio
import copy
import time
from concurrent.futures import Executor
from dataclasses import replace
from typing import Optional

import numpy as np

from src.core.exception import ConfigurationError
from src.core.logging import log_scenario_info, logger
from src.models.kernels import KernelSet
from src.models.optics import CrystalConfig, Geometry
from src.models.schmidt import SchmidtBasis, TripletTable
from src.models.state import TwinBeamState
from src.schemas.config import SourceConfig
from src.services.dynamics.triplet import ExitResponse
from src.services.kernels.builder import (
    build_azimuthal_coefficients,
    build_radial_kernel,
    build_spectral_kernel,
)
from src.services.kernels.pump import pulse_amplitude_xi
from src.services.observables.gram import build_state, total_photon_number
from src.services.optics.dispersion import build_geometry, find_phasematching_angle
from src.services.schmidt.decomposition import azimuthal_family, decompose_kernel
from src.services.schmidt.triplets import assemble_triplets


class TwinBeamSimulator:
    """
    Scenario service: build once, evaluate at many powers.

    Call `initialize()` before `state_at()`. The basis is immutable, so
    states at different powers can be computed from several threads.
    """

    def __init__(self, config: SourceConfig, coupling: Optional[float] = None):
        self.config = config
        self.coupling = coupling if coupling is not None else config.coupling.constant
        self.crystal: Optional[CrystalConfig] = None
        self.geometry: Optional[Geometry] = None
        self.kernels: Optional[KernelSet] = None
        self.basis: Optional[SchmidtBasis] = None
        self._table: Optional[TripletTable] = None
        self._is_ready = False

    async def initialize(self, executor: Optional[Executor] = None) -> None:
        """
        Solve the geometry, build the three kernels and decompose them.

        Kernel builds and decompositions run concurrently in `executor`.
        """
        if self._is_ready:
            return

        logger.info(f"🚀 Building mode structure for scenario '{self.config.name}'...")
        start_time = time.time()
        loop = asyncio.get_running_loop()

        self.crystal, self.geometry = await loop.run_in_executor(executor, self._resolve_optics)
        pump = self.config.to_pump()
        grid = self.config.to_grid_spec()
        mass = self.config.grid.family_truncation_mass

        spectral_kernel, radial_kernel, azimuthal = await asyncio.gather(
            loop.run_in_executor(executor, build_spectral_kernel, pump, self.crystal, self.geometry, grid),
            loop.run_in_executor(executor, build_radial_kernel, pump, self.crystal, self.geometry, grid),
            loop.run_in_executor(executor, build_azimuthal_coefficients, pump, self.geometry, grid),
        )
        self.kernels = KernelSet(spectral=spectral_kernel, radial=radial_kernel, azimuthal=azimuthal)

        spectral, radial = await asyncio.gather(
            loop.run_in_executor(executor, decompose_kernel, spectral_kernel, mass),
            loop.run_in_executor(executor, decompose_kernel, radial_kernel, mass),
        )
        self.basis = SchmidtBasis(
            spectral=spectral,
            radial=radial,
            azimuthal=azimuthal_family(azimuthal, mass),
        )
        self._table = await loop.run_in_executor(
            executor,
            lambda: assemble_triplets(
                self.basis.spectral,
                self.basis.radial,
                self.basis.azimuthal,
                xi=0.0,
                truncation_mass=self.config.grid.truncation_mass,
            ),
        )

        log_scenario_info(
            self.config.name,
            {
                "cut_angle_deg": float(np.rad2deg(self.crystal.cut_angle)),
                "ring_radius": self.geometry.ring_radius,
                "triplets": self._table.count,
                **{f"schmidt_{k}": v for k, v in self.basis.family_schmidt_numbers().items()},
            },
        )
        logger.info(f"✅ Mode structure ready in {time.time() - start_time:.2f}s")
        self._is_ready = True

    @classmethod
    def from_basis(
        cls,
        config: SourceConfig,
        crystal: CrystalConfig,
        geometry: Geometry,
        basis: SchmidtBasis,
        coupling: Optional[float] = None,
    ) -> "TwinBeamSimulator":
        """Ready simulator over a precomputed basis (kernels are not kept)"""
        simulator = cls(config, coupling)
        simulator.crystal = crystal
        simulator.geometry = geometry
        simulator.basis = basis
        simulator._table = assemble_triplets(
            basis.spectral,
            basis.radial,
            basis.azimuthal,
            xi=0.0,
            truncation_mass=config.grid.truncation_mass,
        )
        simulator._is_ready = True
        return simulator

    def _resolve_optics(self) -> tuple[CrystalConfig, Geometry]:
        crystal = self.config.to_crystal()
        geometry = build_geometry(self.config.pump.wavelength_m, self.config.external_angle, crystal)
        if self.config.crystal.cut_angle_deg is None:
            crystal = replace(crystal, cut_angle=find_phasematching_angle(geometry, crystal))
        return crystal, geometry

    def is_ready(self) -> bool:
        return self._is_ready

    @property
    def table(self) -> TripletTable:
        self._require_ready()
        return self._table

    def _require_ready(self) -> None:
        if not self._is_ready:
            raise RuntimeError("Simulator not initialized")

    def with_coupling(self, coupling: float) -> "TwinBeamSimulator":
        """Shallow copy sharing the basis, with a different coupling constant"""
        self._require_ready()
        other = copy.copy(self)
        other.coupling = coupling
        return other

    @property
    def z_end(self) -> float:
        self._require_ready()
        return self.crystal.interaction_length

    def xi_at(self, power: float) -> float:
        return pulse_amplitude_xi(self.config.to_pump(power))

    def response_at(self, power: float, z_end: Optional[float] = None) -> ExitResponse:
        """Exit (U, V) per triplet coefficient at pump power `power` (W)"""
        self._require_ready()
        if self.coupling is None:
            raise ConfigurationError("Coupling constant not set; calibrate first")
        return ExitResponse(
            xi=self.xi_at(power),
            coupling=self.coupling,
            z_end=self.z_end if z_end is None else z_end,
        )

    def state_at(self, power: float, z_end: Optional[float] = None) -> TwinBeamState:
        """Exit state at pump power `power` (W); the basis is reused"""
        response = self.response_at(power, z_end)
        return build_state(
            self._table.with_xi(response.xi),
            self.basis,
            response,
            power=power,
            ring_radius=self.geometry.ring_radius,
        )

    def photon_number_at(self, power: float, z_end: Optional[float] = None) -> float:
        """N_s alone, skipping the correlation reductions"""
        return total_photon_number(self._table, self.response_at(power, z_end))

    async def cleanup(self) -> None:
        self.kernels = None
        self._is_ready = False
        logger.info("Simulator released")
