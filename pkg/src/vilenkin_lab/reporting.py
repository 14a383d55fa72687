"""Experiment records and their CSV/JSON emission.

CSV files open with the comment line ``# schema=1, config=<hash>`` followed
by the column header.  Floats are printed with 17 significant digits so
they round-trip exactly; rows are emitted in sorted index order.  The same
inputs therefore always produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

SCHEMA_VERSION = 1


def config_hash(config: dict) -> str:
    """Stable 16-hex-digit digest of a canonicalized config mapping."""
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]


@dataclass
class ExperimentRecord:
    """One output row: named index columns plus named statistic columns."""

    experiment: str
    index: dict[str, object]
    values: dict[str, float]
    config: str = field(default="")

    def sort_key(self) -> tuple:
        return tuple(self.index.values())


def _format_cell(v: object) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _columns(records: list[ExperimentRecord]) -> list[str]:
    cols: list[str] = ["experiment"]
    for rec in records:
        for k in rec.index:
            if k not in cols:
                cols.append(k)
    for rec in records:
        for k in rec.values:
            if k not in cols:
                cols.append(k)
    cols.append("config")
    return cols


def render_csv(records: list[ExperimentRecord]) -> str:
    if not records:
        return f"# schema={SCHEMA_VERSION}, config=\n"
    rows = sorted(records, key=ExperimentRecord.sort_key)
    cols = _columns(rows)
    lines = [f"# schema={SCHEMA_VERSION}, config={rows[0].config}"]
    lines.append(",".join(cols))
    for rec in rows:
        merged: dict[str, object] = {
            "experiment": rec.experiment,
            "config": rec.config,
            **rec.index,
            **rec.values,
        }
        lines.append(",".join(_format_cell(merged.get(c, "")) for c in cols))
    return "\n".join(lines) + "\n"


def render_json(records: list[ExperimentRecord]) -> str:
    rows = sorted(records, key=ExperimentRecord.sort_key)
    payload = {
        "schema": SCHEMA_VERSION,
        "config": rows[0].config if rows else "",
        "records": [
            {
                "experiment": r.experiment,
                "index": r.index,
                "values": r.values,
            }
            for r in rows
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_records(
    records: list[ExperimentRecord], path: str | Path, fmt: str = "csv"
) -> None:
    if fmt == "csv":
        text = render_csv(records)
    elif fmt == "json":
        text = render_json(records)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    Path(path).write_text(text, encoding="utf-8", newline="\n")
