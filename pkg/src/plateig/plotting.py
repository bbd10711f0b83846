"""Figure rendering for the CLI report paths (file output only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["line_plot", "spectrum_plot", "matrix_plot", "field_plot"]

FIGSIZE = (7.0, 4.5)


def line_plot(path, x, curves, xlabel, ylabel, logy=False, vlines=(), title=None):
    """One or more labelled curves over a common abscissa."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for label, y in curves.items():
        ax.plot(x, y, lw=1.2, label=label)
    for v in vlines:
        ax.axvline(v, color="crimson", ls="--", lw=0.8)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(curves) > 1:
        ax.legend(fontsize=8, ncol=2)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def spectrum_plot(path, values, multiplicities, title=None):
    """Eigenvalues on the real axis, annotated with multiplicity."""
    fig, ax = plt.subplots(figsize=(7.0, 2.2))
    ax.axhline(0, color="gray", lw=0.5)
    for k, m in zip(values, multiplicities):
        ax.plot([k], [0], "o", ms=7, color="navy")
        ax.annotate(f"x{m}" if m > 1 else "", (k, 0), textcoords="offset points",
                    xytext=(0, 8), ha="center", fontsize=8)
    ax.set_yticks([])
    ax.set_xlabel("k")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def matrix_plot(path, matrix, title=None):
    """Magnitude heatmap of a complex matrix."""
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    im = ax.imshow(np.abs(matrix), origin="lower", cmap="viridis")
    fig.colorbar(im, ax=ax, label="|entry|")
    ax.set_xlabel("incidence index")
    ax.set_ylabel("observation index")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def field_plot(path, xs, ys, values, boundary, title=None):
    """Real part of a field on a regular grid with the boundary overlaid."""
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    grid = values.reshape(len(ys), len(xs))
    im = ax.pcolormesh(xs, ys, grid.real, cmap="RdBu_r", shading="auto")
    fig.colorbar(im, ax=ax, label="Re u")
    ax.plot(boundary[:, 0], boundary[:, 1], "k-", lw=1.0)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
