# src/core/logging.py
"""
Loguru setup for simulator runs.

Console output goes to stderr so data written to stdout stays clean.
Every record carries the scenario name in `extra["scenario"]`.
"""
import logging
import sys
import warnings
from typing import Any

from loguru import logger

from src.core.config import settings

CONSOLE_FORMAT = (
    "<green>{time:HH:mm:ss.SSS}</green> | "
    "<level>{level: <8}</level> | "
    "<magenta>{extra[scenario]}</magenta> | "
    "<cyan>{name}</cyan>:<cyan>{line}</cyan> | "
    "<level>{message}</level>"
)


class InterceptHandler(logging.Handler):
    """Route stdlib logging and captured warnings into loguru"""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        # Skip the logging and warnings frames so the caller is reported
        frame, depth = logging.currentframe(), 2
        while frame and frame.f_code.co_filename in (logging.__file__, warnings.__file__):
            frame = frame.f_back
            depth += 1

        logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def setup_logging(level: str | None = None) -> None:
    """Configure console and file sinks once per process"""
    logger.remove()
    logger.configure(extra={"scenario": "-"})

    logger.add(sys.stderr, level=level or settings.LOG_LEVEL, format=CONSOLE_FORMAT, colorize=True)

    log_dir = settings.LOG_DIR
    log_dir.mkdir(parents=True, exist_ok=True)

    if settings.ENVIRONMENT == "production":
        logger.add(
            log_dir / "simulator.jsonl",
            rotation="200 MB",
            retention="10 days",
            compression="zip",
            level="INFO",
            serialize=True,
        )
    else:
        logger.add(log_dir / "simulator.log", rotation="50 MB", retention=5, level="DEBUG")

    logger.add(
        log_dir / "error.log",
        rotation="50 MB",
        retention="30 days",
        level="ERROR",
        backtrace=True,
        diagnose=settings.DEBUG,
    )

    # numpy/scipy RuntimeWarnings (overflow in cosh, ill-conditioned SVD)
    logging.captureWarnings(True)
    logging.basicConfig(handlers=[InterceptHandler()], level=0, force=True)


def log_scenario_info(name: str, params: dict[str, Any]) -> None:
    """Scenario summary; also tags later records with the scenario name"""
    logger.configure(extra={"scenario": name})
    summary = ", ".join(f"{key}={value:.6g}" if isinstance(value, float) else f"{key}={value}" for key, value in params.items())
    logger.bind(parameters=params).info(f"Scenario {name}: {summary}")


def log_error(error: Exception, context: dict[str, Any] | None = None) -> None:
    logger.bind(error_type=type(error).__name__, context=context or {}).error(
        f"{type(error).__name__}: {error}"
    )
