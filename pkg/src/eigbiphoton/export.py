"""Data tables, their CSV/JSON serialisations and the run manifest."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__

FLOAT_FORMAT = "%.12e"


@dataclass
class Table:
    """One grid column plus named value columns; ``units`` maps every column name to its unit."""

    title: str
    grid_name: str
    grid: np.ndarray
    columns: dict
    units: dict = field(default_factory=dict)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        for name, col in self.columns.items():
            col = np.asarray(col, dtype=float)
            if col.shape != self.grid.shape:
                raise ValueError(f"column {name!r} has {col.size} rows, grid has {self.grid.size}")
            self.columns[name] = col

    @property
    def names(self) -> list[str]:
        return [self.grid_name, *self.columns]


def _num(x: float) -> str:
    return FLOAT_FORMAT % x


def to_csv(table: Table, echo: str = "") -> str:
    lines = [f"# {table.title}", f"# eigbiphoton {__version__}"]
    lines += [f"# unit {name}: {table.units.get(name, '1')}" for name in table.names]
    lines += [f"# {row}" for row in echo.splitlines()]
    lines.append(",".join(table.names))
    body = np.column_stack([table.grid, *table.columns.values()])
    lines += [",".join(_num(x) for x in row) for row in body]
    return "\n".join(lines) + "\n"


def _json_num(x: float):
    return float(_num(x)) if np.isfinite(x) else None


def to_json(table: Table, echo: str = "") -> str:
    payload = {
        "title": table.title,
        "version": __version__,
        "grid_name": table.grid_name,
        "units": {name: table.units.get(name, "1") for name in table.names},
        "config": echo.splitlines(),
        "grid": [_json_num(x) for x in table.grid],
        "series": {name: [_json_num(x) for x in col] for name, col in table.columns.items()},
    }
    return json.dumps(payload, indent=1) + "\n"


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Column names and data of a CSV written by :func:`to_csv`."""
    text = Path(path).read_text(encoding="utf-8").splitlines()
    rows = [line for line in text if not line.startswith("#")]
    names = rows[0].split(",")
    data = np.loadtxt(rows[1:], delimiter=",", ndmin=2)
    return names, data


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_table(table: Table, path, fmt: str, echo: str = "") -> Path:
    path = Path(path)
    text = to_csv(table, echo) if fmt == "csv" else to_json(table, echo)
    path.write_text(text, encoding="utf-8")
    return path


def write_manifest(path, command: str, settings: dict, table: Table, files) -> Path:
    """Manifest next to the data: resolved config, grid summary, file checksums, version, timestamp."""
    path = Path(path)
    manifest = {
        "command": command,
        "version": __version__,
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": settings,
        "grid": {
            "name": table.grid_name,
            "unit": table.units.get(table.grid_name, "1"),
            "points": int(table.grid.size),
            "min": float(table.grid.min()),
            "max": float(table.grid.max()),
        },
        "columns": table.names,
        "files": [{"path": Path(f).name, "sha256": sha256(f)} for f in files],
    }
    path.write_text(json.dumps(manifest, indent=1) + "\n", encoding="utf-8")
    return path


def read_manifest(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
