"""Figure rendering for emitted data (headless matplotlib)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def density_figure(xs, ys, title, path):
    """Density curve rendered next to its CSV."""
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.plot(xs, ys, lw=1.6)
    ax.fill_between(xs, 0.0, ys, alpha=0.15)
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def measure_figure(support, weights, title, path):
    """Stem plot of a discrete measure."""
    fig, ax = plt.subplots(figsize=(7, 4.2))
    markerline, stemlines, baseline = ax.stem(support, weights)
    plt.setp(markerline, markersize=5)
    baseline.set_visible(False)
    ax.set_xlabel("support point")
    ax.set_ylabel("weight")
    ax.set_ylim(bottom=0)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
