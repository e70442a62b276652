"""Figure rendering for the report path.

Grouped score bars per scenario and score trajectories for weight sweeps,
written as PNG files next to the text/CSV report.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .core import Method
from .scenarios import MethodComparison, SweepPoint

_METHOD_COLORS = {Method.AHP: "#4878b0", Method.SAW: "#d1895c"}


def slugify(name: str) -> str:
    slug = re.sub(r"[^A-Za-z0-9._-]+", "_", name).strip("_")
    return slug or "scenario"


def render_comparison_figure(comparison: MethodComparison, path: str | Path) -> Path:
    """Grouped bars of display scores per service, one group per method."""
    path = Path(path)
    services = list(comparison.service_ids)
    rankings = comparison.rankings
    n_methods = len(rankings)
    width = 0.8 / n_methods

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for k, ranking in enumerate(rankings):
        entries = {e.service_id: e for e in ranking.entries}
        xs = [i + (k - (n_methods - 1) / 2) * width for i in range(len(services))]
        heights = [entries[s].display_score for s in services]
        bars = ax.bar(
            xs,
            heights,
            width=width,
            label=ranking.method.value,
            color=_METHOD_COLORS.get(ranking.method),
        )
        for bar, sid in zip(bars, services):
            ax.annotate(
                f"#{entries[sid].rank}",
                (bar.get_x() + bar.get_width() / 2, bar.get_height()),
                ha="center",
                va="bottom",
                fontsize=8,
            )
    ax.set_xticks(range(len(services)))
    ax.set_xticklabels(services)
    ax.set_ylim(0, 1.15)
    ax.set_ylabel("display score (best = 1)")
    ax.set_title(comparison.scenario.name)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def render_report_figures(
    comparisons: Sequence[MethodComparison], outdir: str | Path
) -> list[Path]:
    """One score-bar figure per comparison, named after its scenario."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for c in comparisons:
        paths.append(
            render_comparison_figure(c, outdir / f"{slugify(c.scenario.name)}_scores.png")
        )
    return paths


def render_sweep_figure(
    points: Sequence[SweepPoint], criterion_id: str, path: str | Path
) -> Path:
    """Canonical score trajectories against the swept weight, one panel per method."""
    path = Path(path)
    ok_points = [p for p in points if p.comparison is not None]
    if not ok_points:
        raise ValueError("no valid sweep points to plot")
    methods = [r.method for r in ok_points[0].comparison.rankings]
    services = list(ok_points[0].comparison.service_ids)

    fig, axes = plt.subplots(
        1, len(methods), figsize=(5.2 * len(methods), 4.0), squeeze=False
    )
    for ax, method in zip(axes[0], methods):
        for sid in services:
            xs, ys = [], []
            for p in ok_points:
                ranking = p.comparison.ranking_for(method)
                entry = next(e for e in ranking.entries if e.service_id == sid)
                xs.append(p.value)
                ys.append(entry.score)
            ax.plot(xs, ys, marker="o", markersize=3, label=sid)
        ax.set_title(f"{method.value} score vs weight of '{criterion_id}'")
        ax.set_xlabel(f"weight of {criterion_id}")
        ax.set_ylabel("score")
        ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
