"""Canonical serialization of experiment reports.

Reports must be byte-identical across runs for identical (config, seed) in
single-threaded mode, so serialization is canonical JSON (sorted keys,
fixed separators, shortest round-trip floats) and timing is recorded as 0
unless timing capture is explicitly enabled.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

TOOL_VERSION = "0.1.0"


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator}
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "to_dict"):
        return _jsonable(value.to_dict())
    if hasattr(value, "tolist"):
        return _jsonable(value.tolist())
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)


def canonical_json(payload: Any) -> str:
    return json.dumps(_jsonable(payload), sort_keys=True, separators=(",", ":")) + "\n"


@dataclass
class ExperimentReport:
    """One experiment: the config that produced it, per-instance records,
    and aggregate statistics.  Everything needed to re-run any single
    instance (group spec, set specs, derived seed) lives in its record."""

    recipe: str
    config: Dict[str, Any]
    instances: List[Dict[str, Any]] = field(default_factory=list)
    aggregates: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    elapsed_ms: int = 0
    tool_version: str = TOOL_VERSION

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tool": "grplab",
            "tool_version": self.tool_version,
            "recipe": self.recipe,
            "config": self.config,
            "seed": self.seed,
            "instances": self.instances,
            "aggregates": self.aggregates,
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    def csv_rows(self) -> List[Dict[str, Any]]:
        return [_flatten(inst) for inst in self.instances]


def _flatten(record: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    flat: Dict[str, Any] = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        value = _jsonable(value)
        if isinstance(value, dict):
            flat.update(_flatten(value, prefix=f"{name}."))
        elif isinstance(value, list):
            flat[name] = json.dumps(value, separators=(",", ":"))
        else:
            flat[name] = value
    return flat


def rows_to_csv(rows: Sequence[Dict[str, Any]], columns: Optional[Sequence[str]] = None) -> str:
    """Render rows as CSV; column order is the provided list or the sorted
    union of keys, so output is stable for a fixed schema."""
    if columns is None:
        seen = set()
        for row in rows:
            seen.update(row.keys())
        columns = sorted(seen)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: row.get(k, "") for k in columns})
    return buf.getvalue()
