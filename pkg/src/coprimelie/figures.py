"""Matplotlib figures for reports (Agg backend, PNG output)."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .report import STATUSES, ScenarioReport  # noqa: E402

_COLOURS = {"pass": "#4c9a2a", "fail": "#c0392b", "abstain": "#e0a030", "skip": "#9e9e9e"}
_META = {"Software": None}  # keeps PNG bytes independent of the matplotlib version


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=100, metadata=_META)
    plt.close(fig)
    return path


def status_figure(reports: list[ScenarioReport], path: Path) -> Path:
    """Stacked bars: check statuses per scenario."""
    fig, ax = plt.subplots(figsize=(7, 1.5 + 0.45 * max(1, len(reports))))
    names = [r.title for r in reports] or ["(none)"]
    left = [0] * len(names)
    for st in STATUSES:
        counts = [sum(c.status == st for c in r.checks) for r in reports] or [0]
        ax.barh(names, counts, left=left, color=_COLOURS[st], label=st)
        left = [a + b for a, b in zip(left, counts)]
    ax.invert_yaxis()
    ax.set_xlabel("checks")
    ax.legend(loc="lower right", fontsize="small")
    fig.tight_layout()
    return _save(fig, path)


def grading_dims_figure(dims: dict[str, list[int]], path: Path) -> Path:
    """Heat map of dim L_i per instance and residue i."""
    names = list(dims)
    width = max(len(d) for d in dims.values())
    grid = [d + [0] * (width - len(d)) for d in dims.values()]
    fig, ax = plt.subplots(figsize=(2.5 + 0.6 * width, 1.6 + 0.35 * len(names)))
    ax.imshow(grid, cmap="Blues", aspect="auto")
    top = max(max(row) for row in grid) or 1
    for i, row in enumerate(grid):
        for j, v in enumerate(row):
            ax.text(j, i, str(v), ha="center", va="center", fontsize=8,
                    color="white" if v > top / 2 else "black")
    ax.set_xticks(range(width))
    ax.set_xlabel("residue i")
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names, fontsize=7)
    ax.set_title("dim L_i")
    fig.tight_layout()
    return _save(fig, path)


def series_figure(series: dict[str, list[int]], path: Path) -> Path:
    """Orders of lower central series terms, log scale."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, orders in series.items():
        ax.plot(range(1, len(orders) + 1), orders, marker="o", label=name)
    ax.set_yscale("log")
    ax.set_xlabel("i")
    ax.set_ylabel("|gamma_i|")
    ax.legend(fontsize="small")
    fig.tight_layout()
    return _save(fig, path)


def _collect(reports: Iterable[ScenarioReport], key: str) -> dict[str, list[int]]:
    out = {}
    for r in reports:
        for c in r.checks:
            val = c.observed.get(key)
            if isinstance(val, list) and val and all(isinstance(v, int) for v in val):
                label = c.name.rsplit(":", 1)[0] if ":" in c.name else r.title
                out.setdefault(label, val)
    return out


def render_report_figures(reports: list[ScenarioReport], outdir: str | Path) -> list[Path]:
    """Write every figure the reports have data for; returns the paths."""
    outdir = Path(outdir)
    paths = [status_figure(reports, outdir / "status.png")]
    dims = _collect(reports, "dims")
    if dims:
        paths.append(grading_dims_figure(dims, outdir / "grading_dims.png"))
    series = _collect(reports, "series_orders")
    if series:
        paths.append(series_figure(series, outdir / "series_orders.png"))
    return paths
