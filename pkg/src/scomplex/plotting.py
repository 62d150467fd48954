"""Figure rendering for the report paths; files only, no interactive backend."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_spectrum_plot(spectra: dict[str, np.ndarray], path: str,
                       title: str = "eigenvalues") -> str:
    """One marker column per labelled spectrum, eigenvalues on the y axis."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for i, (label, values) in enumerate(sorted(spectra.items())):
        values = np.asarray(values, dtype=float)
        ax.plot(np.full(values.shape, i), values, "o", ms=5, alpha=0.75, label=label)
    ax.set_xticks(range(len(spectra)))
    ax.set_xticklabels(sorted(spectra), rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("eigenvalue")
    ax.set_title(title)
    ax.grid(True, axis="y", alpha=0.3)
    if len(spectra) > 1:
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_curvature_plot(rows: list[dict], path: str) -> str:
    """Curvature per simplex, grouped and colored by dimension."""
    fig, ax = plt.subplots(figsize=(max(6, 0.25 * len(rows)), 4))
    dims = sorted({r["dim"] for r in rows})
    cmap = plt.get_cmap("tab10")
    x = 0
    for d in dims:
        group = [r for r in rows if r["dim"] == d]
        xs = np.arange(x, x + len(group))
        ax.bar(xs, [r["forman"] for r in group], color=cmap(d % 10),
               label=f"dim {d}")
        x += len(group) + 1
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_ylabel("curvature (potential / weight)")
    ax.set_xticks([])
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_metric_plot(edge_weights: dict[str, dict], path: str) -> str:
    """Histogram of the finite metric edge weights per flavor."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for flavor, table in sorted(edge_weights.items()):
        vals = [v for v in table.values() if np.isfinite(v)]
        if vals:
            ax.hist(vals, bins=20, alpha=0.5, label=flavor)
    ax.set_xlabel("edge weight")
    ax.set_ylabel("count")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
