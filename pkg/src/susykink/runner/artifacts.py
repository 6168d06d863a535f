"""CSV tables with ``#`` header comments and a JSON metadata sidecar per run."""

from __future__ import annotations

import logging
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Dict, List

import numpy as np
import simplejson as json

from .config import RunConfig
from .state import ResultBundle, Table

logger = logging.getLogger(__name__)


def code_version() -> str:
    try:
        return version("susykink")
    except PackageNotFoundError:
        return "unknown"


def _format(value, precision: int) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{precision}g}"
    if isinstance(value, (complex, np.complexfloating)):
        raise ValueError("Complex values must be split into columns before writing")
    return str(value)


def table_to_csv(table: Table, command: str, precision: int = 17) -> str:
    lines = [
        f"# command: {command}",
        f"# table: {table.name}",
        "# units: " + ",".join(table.units),
        ",".join(table.columns),
    ]
    for row in table.rows:
        lines.append(",".join(_format(v, precision) for v in row))
    return "\n".join(lines) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def write_bundle(bundle: ResultBundle, config: RunConfig) -> Dict[str, List[Path]]:
    """Write ``<stem>_<table>.csv`` for each table and ``<stem>.json`` with the metadata."""
    out_dir = config.output.resolved_directory()
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = config.output.stem or bundle.command
    written = []
    for name, table in bundle.tables.items():
        path = out_dir / f"{stem}_{name}.csv"
        path.write_text(table_to_csv(table, bundle.command, config.output.precision), encoding="utf-8")
        written.append(path)
    meta_path = out_dir / f"{stem}.json"
    metadata = dict(bundle.metadata)
    metadata.setdefault("config", config.echo())
    metadata.setdefault("code_version", code_version())
    metadata["tables"] = {
        name: {"columns": t.columns, "units": t.units, "rows": len(t.rows)} for name, t in bundle.tables.items()
    }
    with meta_path.open("w", encoding="utf-8") as f:
        json.dump(_jsonable(metadata), f, indent=2, sort_keys=True, ignore_nan=True)
    logger.info(f"Wrote {len(written)} tables and metadata to {out_dir}")
    return {"tables": written, "metadata": [meta_path]}
