# src/services/io/loader.py
"""
Scenario file loading
"""
from pathlib import Path
from typing import Optional

import yaml
from pydantic import ValidationError

from src.core.exception import ConfigurationError
from src.core.logging import logger
from src.schemas.config import SourceConfig


def _dotted(location: tuple) -> str:
    return ".".join(str(part) for part in location) or "<root>"


def parse_config(data: Optional[dict]) -> SourceConfig:
    """Validate a parsed mapping; errors name the offending dotted key"""
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigurationError("Scenario file must contain a mapping", details={"type": type(data).__name__})

    try:
        return SourceConfig.model_validate(data)
    except ValidationError as e:
        errors = e.errors()
        first = errors[0]
        key = _dotted(first["loc"])
        raise ConfigurationError(
            f"Invalid value for '{key}': {first['msg']}",
            details={"key": key, "errors": [{"key": _dotted(err["loc"]), "message": err["msg"]} for err in errors]},
        ) from e


def load_config(path: Optional[Path]) -> SourceConfig:
    """
    Load a YAML scenario file.

    Missing keys take the default scenario values; no path means
    the default scenario.
    """
    if path is None:
        return SourceConfig()

    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"Scenario file not found: {path}", details={"path": str(path)})

    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Scenario file is not valid YAML: {e}", details={"path": str(path)}) from e

    config = parse_config(data)
    logger.info(f"Loaded scenario '{config.name}' from {path}")
    return config
