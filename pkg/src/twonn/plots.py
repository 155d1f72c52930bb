"""Matplotlib renderings of fits, scan curves, and convergence tables.

Figures are rendered straight to files (Agg backend); nothing interactive.
"""

from __future__ import annotations

import math

import numpy as np


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_fit(x, y, kept, d_hat: float, path: str, title: str | None = None) -> None:
    """Scatter of the fit plane (log mu, -log(1 - F)) with kept points in
    red, discarded in gray, and the fitted line through the origin."""
    plt = _plt()
    x = np.asarray(x)
    y = np.asarray(y)
    kept = np.asarray(kept, dtype=bool)
    finite = np.isfinite(y)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.scatter(x[~kept & finite], y[~kept & finite], s=8, c="0.7", label="discarded")
    ax.scatter(x[kept], y[kept], s=8, c="crimson", label="fitted")
    xmax = x[finite].max() if finite.any() else 1.0
    xs = np.linspace(0.0, xmax, 50)
    ax.plot(xs, d_hat * xs, "k-", lw=1, label=f"slope {d_hat:.2f}")
    ax.set_xlabel(r"$\log\,\mu$")
    ax.set_ylabel(r"$-\log(1 - F_{emp})$")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_scan(curve, plateau=None, path: str = "scan.png", title: str | None = None) -> None:
    """Dimension estimate vs block size (log x) with block spread bars and
    the detected plateau shaded."""
    plt = _plt()
    sizes = [p.block_size for p in curve.points]
    means = [p.d_mean for p in curve.points]
    stds = [p.d_std for p in curve.points]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.errorbar(sizes, means, yerr=stds, fmt="o-", ms=4, lw=1, capsize=2)
    if plateau is not None and plateau.found:
        ax.axvspan(plateau.lo, plateau.hi, color="tab:green", alpha=0.15)
        ax.axhline(plateau.d_plateau, color="tab:green", lw=1, ls="--")
    ax.set_xscale("log")
    ax.set_xlabel("block size N")
    ax.set_ylabel(r"$\hat{d}$")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_convergence(rows, path: str, title: str | None = None) -> None:
    """Mean estimate vs sample size, one line per nominal dimension.

    rows: iterable of (dim, n, mean, std)."""
    plt = _plt()
    by_dim: dict[int, list[tuple[int, float, float]]] = {}
    for d, n, mean, std in rows:
        by_dim.setdefault(int(d), []).append((int(n), float(mean), float(std)))
    fig, ax = plt.subplots(figsize=(5, 4))
    for d in sorted(by_dim):
        pts = sorted(by_dim[d])
        ns = [p[0] for p in pts]
        ms = [p[1] for p in pts]
        es = [p[2] for p in pts]
        ax.errorbar(ns, ms, yerr=es, fmt="o-", ms=4, lw=1, capsize=2, label=f"d = {d}")
        ax.axhline(d, color="0.8", lw=0.8, zorder=0)
    ax.set_xscale("log")
    ax.set_xlabel("number of points N")
    ax.set_ylabel(r"mean $\hat{d}$")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
