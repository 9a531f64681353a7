"""Figures for exported tables.

matplotlib is optional and imported only when a PNG is requested; the
generated script is plain text and needs nothing from this package.
"""
from __future__ import annotations

from pathlib import Path

from .export import Table

_SCRIPT = '''"""Plot {data_name}. Requires numpy and matplotlib."""
import json
import sys

import numpy as np
import matplotlib

if "--show" not in sys.argv:
    matplotlib.use("Agg")
import matplotlib.pyplot as plt

DATA = "{data_name}"

if DATA.endswith(".json"):
    with open(DATA) as fh:
        payload = json.load(fh)
    x = np.array(payload["grid"], dtype=float)
    series = {{k: np.array(v, dtype=float) for k, v in payload["series"].items()}}
else:
    with open(DATA) as fh:
        rows = [line for line in fh if not line.startswith("#")]
    names = rows[0].strip().split(",")
    data = np.loadtxt(rows[1:], delimiter=",", ndmin=2)
    x = data[:, 0]
    series = {{name: data[:, i + 1] for i, name in enumerate(names[1:])}}

fig, ax = plt.subplots(figsize=(6, 4))
for name, y in series.items():
    ax.plot(x, y, label=name)
ax.set_xlabel("{xlabel}")
ax.set_ylabel("{ylabel}")
ax.set_title("{title}")
ax.legend()
fig.tight_layout()
fig.savefig("{png_name}", dpi=150)
if "--show" in sys.argv:
    plt.show()
'''


def _labels(table: Table) -> tuple[str, str]:
    xlabel = f"{table.grid_name} [{table.units.get(table.grid_name, '1')}]"
    units = {table.units.get(name, "1") for name in table.columns}
    ylabel = "value" if len(units) != 1 else f"value [{units.pop()}]"
    return xlabel, ylabel


def plot_script(table: Table, data_path, png_path) -> str:
    """Standalone matplotlib script that redraws ``data_path`` into ``png_path`` (both by file name)."""
    xlabel, ylabel = _labels(table)
    return _SCRIPT.format(data_name=Path(data_path).name, png_name=Path(png_path).name,
                          xlabel=xlabel, ylabel=ylabel, title=table.title)


def write_plot_script(table: Table, data_path, path) -> Path:
    path = Path(path)
    png = Path(data_path).with_suffix(".png")
    path.write_text(plot_script(table, data_path, png), encoding="utf-8")
    return path


def render_png(table: Table, path) -> Path:
    """Draw every column against the grid into ``path``; needs the ``plot`` extra."""
    try:
        import matplotlib
    except ImportError as exc:
        raise RuntimeError("PNG output needs matplotlib: pip install 'eigbiphoton[plot]'") from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    xlabel, ylabel = _labels(table)
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, col in table.columns.items():
        ax.plot(table.grid, col, label=name, lw=1.0)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(table.title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)
    return path
