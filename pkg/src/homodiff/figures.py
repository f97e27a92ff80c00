"""File-rendered matplotlib figures for report curves and mixing matrices."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .evaluation import StratumPoint, ThresholdPoint  # noqa: E402


def save_curve_figure(
    path: str | Path,
    points: Sequence[StratumPoint],
    *,
    xlabel: str,
    title: str | None = None,
) -> None:
    """Hit rate per stratum (line, left axis) over stratum population (bars, right)."""
    labels = [str(p.value) for p in points]
    rates = [p.hits for p in points]
    counts = [p.count for p in points]
    x = np.arange(len(points))

    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax2 = ax.twinx()
    ax2.bar(x, counts, color="#c9d7e8", width=0.6, zorder=1)
    ax2.set_ylabel("population", color="#5b7ea6")
    ax2.set_yscale("log" if max(counts, default=1) > 50 * max(min(counts, default=1), 1) else "linear")
    ax.plot(x, rates, "o-", color="#b03a2e", zorder=3)
    ax.set_xticks(x, labels)
    ax.set_ylim(0.0, 1.0)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("hits", color="#b03a2e")
    ax.set_zorder(ax2.get_zorder() + 1)
    ax.patch.set_visible(False)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_threshold_figure(path: str | Path, points: Sequence[ThresholdPoint]) -> None:
    """Hit rate and retained fraction as functions of the confidence floor."""
    taus = [p.tau for p in points]
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    defined = [(p.tau, p.hits) for p in points if p.hits is not None]
    if defined:
        ax.plot(*zip(*defined), "o-", color="#b03a2e", label="hits")
    ax.set_xlabel("confidence threshold")
    ax.set_ylabel("hits", color="#b03a2e")
    ax.set_ylim(0.0, 1.0)
    ax2 = ax.twinx()
    ax2.plot(taus, [p.retained_fraction for p in points], "s--", color="#5b7ea6")
    ax2.set_ylabel("retained fraction", color="#5b7ea6")
    ax2.set_ylim(0.0, 1.05)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_matrix_figure(
    path: str | Path,
    values: np.ndarray,
    axis_labels: Sequence,
    *,
    title: str | None = None,
    diverging: bool = False,
) -> None:
    """Heatmap of a labeled square matrix; NaN cells render blank."""
    values = np.asarray(values, dtype=np.float64)
    k = values.shape[0]
    fig, ax = plt.subplots(figsize=(5.2, 4.4))
    if diverging:
        bound = np.nanmax(np.abs(values)) if np.isfinite(values).any() else 1.0
        im = ax.imshow(values, cmap="RdBu_r", vmin=-bound, vmax=bound)
    else:
        im = ax.imshow(values, cmap="viridis")
    im.cmap.set_bad(color="#eeeeee")
    stride = max(1, k // 12)
    ticks = np.arange(0, k, stride)
    ax.set_xticks(ticks, [str(axis_labels[int(i)]) for i in ticks], rotation=45, ha="right")
    ax.set_yticks(ticks, [str(axis_labels[int(i)]) for i in ticks])
    fig.colorbar(im, ax=ax, shrink=0.85)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
