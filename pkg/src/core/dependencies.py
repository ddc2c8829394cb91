# src/core/dependencies.py
"""
Global dependencies for the entire application
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from src.core.config import settings
from src.core.logging import logger
from src.schemas.config import SourceConfig
from src.services.simulator import TwinBeamSimulator


# ==================== WORKER POOL ====================

_executor: Optional[ThreadPoolExecutor] = None


def get_executor() -> ThreadPoolExecutor:
    """Get the worker pool"""
    if _executor is None:
        raise RuntimeError("Worker pool not initialized")
    return _executor


# ==================== SIMULATOR ====================

_simulator: Optional[TwinBeamSimulator] = None


def get_simulator() -> TwinBeamSimulator:
    """Get the scenario simulator"""
    if _simulator is None:
        raise RuntimeError("Simulator not initialized")
    return _simulator


def set_simulator(simulator: TwinBeamSimulator) -> None:
    """Replace the simulator, e.g. after calibrating the coupling"""
    global _simulator
    _simulator = simulator


async def initialize_services(config: SourceConfig, threads: Optional[int] = None) -> None:
    """
    Start the worker pool and build the scenario's mode structure.

    Called once per CLI run from `main.py`.
    """
    global _executor, _simulator

    threads = threads or settings.WORKER_THREADS
    logger.info(f"🚀 Initializing services ({threads} worker threads)...")

    _executor = ThreadPoolExecutor(max_workers=threads, thread_name_prefix="twinbeam")

    _simulator = TwinBeamSimulator(config)
    await _simulator.initialize(_executor)

    logger.info("✅ All services ready")


async def cleanup_services() -> None:
    """Cleanup on shutdown"""
    global _executor, _simulator

    logger.info("🛑 Shutting down services...")

    if _simulator:
        await _simulator.cleanup()
        _simulator = None

    if _executor:
        _executor.shutdown(wait=True)
        _executor = None

    logger.info("✅ Cleanup complete")
