"""Matplotlib rendering of sweep results and threshold maps to image files."""

from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .sweeps import SweepResult, ThresholdMap  # noqa: E402

__all__ = ["render_sweep_figure", "render_threshold_figure"]


def _axis_scale(name: str, values) -> str:
    values = np.asarray(values, dtype=float)
    if name == "beta" and values.min() > 0 and values.max() / values.min() > 50:
        return "log"
    return "linear"


def render_sweep_figure(result: SweepResult, path: str) -> None:
    """Two stacked panels: correlators on top, witnesses below."""
    x = np.asarray(result.axis_values, dtype=float)
    scale = _axis_scale(result.axis_name, x)
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.0, 6.4), sharex=True)

    ax1.plot(x, result.column("C1"), "o-", ms=3, label="C1")
    ax1.plot(x, result.column("C2"), "s-", ms=3, label="C2")
    ax1.axhline(0.0, color="0.7", lw=0.8)
    ax1.set_ylabel("connected correlation")
    ax1.legend(frameon=False)
    ax1.set_title(result.scenario.name)

    ax2.plot(x, result.column("negativity"), "o-", ms=3, label="negativity")
    lhs = result.column("maccone_lhs")
    if np.isfinite(lhs).any():
        ax2.plot(x, lhs, "s--", ms=3, label="|P| + |P'|")
        ax2.axhline(1.0, color="tab:brown", ls=":", lw=1.0, label="two-basis cutoff")
    ax2.plot(x, np.abs(result.column("C2")), "^-", ms=3, label="|C2|")
    ax2.set_xlabel(result.axis_name)
    ax2.set_ylabel("witness value")
    ax2.set_xscale(scale)
    ax2.legend(frameon=False, fontsize=8)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_threshold_figure(tm: ThresholdMap, path: str) -> None:
    """Heatmap of |C2| with the negativity contour, plus both threshold curves."""
    betas = np.asarray(tm.beta_grid)
    hs = np.asarray(tm.h_grid)
    fig, axes = plt.subplots(3, 1, figsize=(6.0, 9.0))

    ax = axes[0]
    mesh = ax.pcolormesh(hs, betas, tm.c2_grid, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="|C2|")
    try:
        ax.contour(hs, betas, tm.n_grid, levels=[tm.level], colors="red", linewidths=1.2)
    except ValueError:
        pass  # contour absent when N never crosses the level
    ax.set_yscale("log")
    ax.set_xlabel("h")
    ax.set_ylabel("beta")
    ax.set_title(f"|C2| with N = {tm.level:g} contour")

    ax = axes[1]
    ax.plot(betas, tm.c2_threshold_per_beta, "o-", ms=3)
    ax.set_xscale("log")
    ax.set_xlabel("beta")
    ax.set_ylabel("|C2| threshold")

    ax = axes[2]
    ax.plot(hs, tm.beta_threshold_per_h, "o-", ms=3)
    ax.set_yscale("log")
    ax.set_xlabel("h")
    ax.set_ylabel("beta threshold")

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
