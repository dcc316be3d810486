"""Deterministic delimited-table output shared by all commands.

Every artifact starts with a ``#``-prefixed header block (engine version,
config hash, corpus provenance, seed when randomized) followed by an
RFC-4180-style CSV body.  Identical inputs produce byte-identical files.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
from decimal import Decimal, ROUND_HALF_UP
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from . import ENGINE_VERSION


def round_half_up(value: float, places: int = 2) -> float:
    """Round with ties away from zero (the documented printing convention)."""
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def fmt(value: Any, places: int = 2) -> str:
    """Render a cell: floats at fixed places (round-half-up), rest as str."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{round_half_up(value, places):.{places}f}"
    if value is None:
        return ""
    return str(value)


def config_hash(config: Mapping[str, Any]) -> str:
    """Stable SHA-256 of a resolved configuration mapping."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"),
                           ensure_ascii=True, default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def render_table(rows: Iterable[Sequence[Any]], schema: Sequence[str],
                 meta: Mapping[str, Any] | None = None) -> str:
    """Render header block + CSV into a string (see ``write_table``)."""
    buf = io.StringIO()
    buf.write(f"# scimap {ENGINE_VERSION}\n")
    for key, value in (meta or {}).items():
        buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    writer.writerow(list(schema))
    for row in rows:
        if len(row) != len(schema):
            raise ValueError(f"row width {len(row)} != schema width {len(schema)}")
        writer.writerow(["" if cell is None else cell for cell in row])
    return buf.getvalue()


def write_table(rows: Iterable[Sequence[Any]], schema: Sequence[str],
                path: str | Path, meta: Mapping[str, Any] | None = None) -> Path:
    """Write a table artifact; returns the path written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_table(rows, schema, meta), encoding="utf-8", newline="")
    return path
