# src/services/io/writer.py
"""
CSV and JSON emission.

CSV files start with a `#` line holding the run metadata as sorted
JSON, then a column header; floats use CSV_FLOAT_FORMAT.
"""
import json
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel

from src.core.constants import CSV_FLOAT_FORMAT
from src.core.logging import logger


def _format(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return CSV_FLOAT_FORMAT % float(value)


def write_csv(path: Path, columns: dict[str, Any], metadata: dict[str, Any]) -> Path:
    """Columns of equal length, written in insertion order"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    values = [np.asarray(columns[name]) for name in names]
    lengths = {v.shape[0] for v in values}
    if len(lengths) > 1:
        raise ValueError(f"Columns of unequal length: {dict(zip(names, [v.shape[0] for v in values]))}")

    lines = ["# " + json.dumps(metadata, sort_keys=True), ",".join(names)]
    for row in zip(*(v.tolist() for v in values)):
        lines.append(",".join(_format(x) for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    logger.debug(f"Wrote {path} ({len(lines) - 2} rows)")
    return path


def write_records(path: Path, records: list[BaseModel], metadata: dict[str, Any]) -> Path:
    """Scalar fields of pydantic records as CSV columns"""
    rows = [r.model_dump() for r in records]
    fields = [k for k, v in rows[0].items() if isinstance(v, (int, float, bool))]
    return write_csv(path, {k: np.array([row[k] for row in rows]) for k in fields}, metadata)


def write_json(path: Path, payload: Any, metadata: dict[str, Any] | None = None) -> Path:
    """
    Pretty JSON with sorted keys.

    With `metadata`, a mapping payload gains a `metadata` key and any
    other payload is nested under `records`.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    if metadata is not None:
        nested = payload if isinstance(payload, dict) else {"records": payload}
        payload = {"metadata": metadata, **nested}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.debug(f"Wrote {path}")
    return path
