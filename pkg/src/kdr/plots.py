"""Figure rendering for the CLI report paths.

Every report command writes its delimited output first and then, unless asked
not to, renders a matplotlib figure next to it: scatter views of the projected
coordinates for ``fit``, grouped mean/SD bars for ``bench``, and the contrast
gap histogram for ``probe``.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["projection_figure", "benchmark_figure", "probe_figure"]

plt.rcParams.update(
    {
        "figure.dpi": 120,
        "savefig.dpi": 150,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "font.size": 9,
    }
)

# Treat a response with at most this many distinct values as categorical.
MAX_DISCRETE_LEVELS = 6


def projection_figure(Z: np.ndarray, y: np.ndarray, path: str, response_name: str = "response") -> str:
    """Scatter views of the response against each projected direction.

    With two or more directions an extra panel shows the first two projected
    coordinates against each other, colored (or marker-coded, for a discrete
    response) by the response.
    """
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    y = np.asarray(y, dtype=float).reshape(len(Z), -1)[:, 0]
    d = Z.shape[1]
    levels = np.unique(y)
    discrete = len(levels) <= MAX_DISCRETE_LEVELS

    n_panels = d + (1 if d >= 2 else 0)
    ncols = min(n_panels, 3)
    nrows = -(-n_panels // ncols)
    fig, axes = plt.subplots(nrows, ncols, figsize=(3.6 * ncols, 3.0 * nrows), squeeze=False)
    flat = axes.ravel()

    for i in range(d):
        ax = flat[i]
        ax.scatter(Z[:, i], y, s=12, alpha=0.7, edgecolors="none")
        ax.set_xlabel(f"direction {i + 1}")
        ax.set_ylabel(response_name)

    if d >= 2:
        ax = flat[d]
        if discrete:
            markers = ["o", "x", "s", "^", "v", "D"]
            for k, level in enumerate(levels):
                mask = y == level
                ax.scatter(
                    Z[mask, 0], Z[mask, 1], s=14, alpha=0.8,
                    marker=markers[k % len(markers)], label=f"{response_name}={level:g}",
                )
            ax.legend(fontsize=7)
        else:
            sc = ax.scatter(Z[:, 0], Z[:, 1], c=y, s=14, alpha=0.8, cmap="viridis")
            fig.colorbar(sc, ax=ax, label=response_name)
        ax.set_xlabel("direction 1")
        ax.set_ylabel("direction 2")

    for ax in flat[n_panels:]:
        ax.set_visible(False)

    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def benchmark_figure(results: list, path: str) -> str:
    """Grouped bar chart of mean distance (with SD whiskers) per method."""
    methods = sorted({r.method for r in results})
    params = sorted({r.parameter for r in results})
    width = 0.8 / max(len(methods), 1)
    x = np.arange(len(params), dtype=float)

    fig, ax = plt.subplots(figsize=(1.8 + 1.6 * len(params), 3.4))
    for k, method in enumerate(methods):
        means, sds = [], []
        for p in params:
            cell = [r for r in results if r.method == method and r.parameter == p]
            means.append(cell[0].mean if cell else np.nan)
            sds.append((cell[0].sd or 0.0) if cell else 0.0)
        ax.bar(x + (k - (len(methods) - 1) / 2) * width, means, width,
               yerr=sds, capsize=3, label=method.upper())
    regression = results[0].regression if results else "?"
    ax.set_xticks(x)
    ax.set_xticklabels([f"{p:g}" for p in params])
    ax.set_xlabel("noise / offset parameter")
    ax.set_ylabel("projection distance")
    ax.set_title(f"benchmark regression {regression}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def probe_figure(gaps: np.ndarray, path: str) -> str:
    """Histogram of contrast(random) - contrast(containing) over probe trials."""
    gaps = np.asarray(gaps, dtype=float)
    fig, ax = plt.subplots(figsize=(4.6, 3.2))
    ax.hist(gaps, bins=min(30, max(8, len(gaps) // 4)), alpha=0.85)
    ax.axvline(0.0, color="k", lw=1.0, ls="--")
    ax.set_xlabel("contrast(random frame) - contrast(containing frame)")
    ax.set_ylabel("trials")
    frac = float(np.mean(gaps > 0)) if len(gaps) else float("nan")
    ax.set_title(f"containing frame scored lower in {frac:.0%} of trials")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
