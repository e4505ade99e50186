"""Figure builders: each returns a matplotlib Figure ready to save."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import estimate_channels


def trajectory_figure(datasets: dict[str, dict]):
    """Plan-view X-Y paths, one line per labelled trajectory file."""
    fig, ax = plt.subplots(figsize=(7, 5))
    for label, cols in datasets.items():
        ax.plot(cols["X"], cols["Y"], label=label, linewidth=1.2)
        ax.plot(cols["X"][-1], cols["Y"][-1], "o", markersize=4,
                color=ax.lines[-1].get_color())
    ax.set_xlabel("X [m]")
    ax.set_ylabel("Y [m]")
    ax.set_title("planar trajectory")
    ax.axis("equal")
    ax.grid(alpha=0.3)
    if len(datasets) > 1:
        ax.legend()
    fig.tight_layout()
    return fig


def forces_figure(datasets: dict[str, dict]):
    """Axle normal loads and wheel-frame planar forces against time."""
    fig, axes = plt.subplots(3, 1, figsize=(8, 8), sharex=True)
    for label, cols in datasets.items():
        suffix = f" ({label})" if len(datasets) > 1 else ""
        t = cols["t"]
        axes[0].plot(t, cols["Nf"], label="front" + suffix, linewidth=0.9)
        axes[0].plot(t, cols["Nr"], label="rear" + suffix, linewidth=0.9)
        axes[1].plot(t, cols["Flf"], label="front" + suffix, linewidth=0.9)
        axes[1].plot(t, cols["Flr"], label="rear" + suffix, linewidth=0.9)
        axes[2].plot(t, cols["Fcf"], label="front" + suffix, linewidth=0.9)
        axes[2].plot(t, cols["Fcr"], label="rear" + suffix, linewidth=0.9)
    axes[0].set_ylabel("N [N]")
    axes[1].set_ylabel("F_l [N]")
    axes[2].set_ylabel("F_c [N]")
    axes[2].set_xlabel("t [s]")
    axes[0].set_title("normal loads and wheel forces")
    for ax in axes:
        ax.grid(alpha=0.3)
        ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    return fig


def vertical_figure(datasets: dict[str, dict]):
    """Heave, pitch, and solved sinkages against time."""
    fig, axes = plt.subplots(3, 1, figsize=(8, 8), sharex=True)
    for label, cols in datasets.items():
        suffix = f" ({label})" if len(datasets) > 1 else ""
        t = cols["t"]
        axes[0].plot(t, cols["z"], label="z" + suffix, linewidth=0.9)
        axes[1].plot(t, np.degrees(cols["theta"]),
                     label="theta" + suffix, linewidth=0.9)
        axes[2].plot(t, cols["hf_f"], label="front" + suffix, linewidth=0.9)
        axes[2].plot(t, cols["hf_r"], label="rear" + suffix, linewidth=0.9)
    axes[0].set_ylabel("heave z [m]")
    axes[1].set_ylabel("pitch [deg]")
    axes[2].set_ylabel("sinkage [m]")
    axes[2].set_xlabel("t [s]")
    axes[0].set_title("vertical response")
    for ax in axes:
        ax.grid(alpha=0.3)
        ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    return fig


def estimate_figure(datasets: dict[str, dict], truth: float | None = None):
    """Parameter estimate with a +/- one-sigma band, plus innovations."""
    fig, axes = plt.subplots(2, 1, figsize=(8, 6), sharex=True,
                             height_ratios=[2, 1])
    for label, cols in datasets.items():
        t = cols["t"]
        w = cols["w_hat"]
        sd = np.sqrt(np.maximum(cols["P_w"], 0.0))
        line, = axes[0].plot(t, w, label=label, linewidth=1.1)
        axes[0].fill_between(t, w - sd, w + sd, alpha=0.2,
                             color=line.get_color())
        channels = estimate_channels(cols)
        suffix = f" ({label})" if len(datasets) > 1 else ""
        for c in channels:
            axes[1].plot(t, cols[f"innov_{c}"], linewidth=0.5,
                         label=c + suffix)
    if truth is not None:
        axes[0].axhline(truth, color="k", linestyle="--", linewidth=1.0,
                        label=f"true n = {truth:g}")
    axes[0].set_ylabel("estimated n")
    axes[0].set_title("sinkage-exponent estimate")
    axes[0].legend(loc="upper right", fontsize=8)
    axes[1].set_ylabel("innovation")
    axes[1].set_xlabel("t [s]")
    axes[1].legend(loc="upper right", fontsize=7, ncol=2)
    for ax in axes:
        ax.grid(alpha=0.3)
    fig.tight_layout()
    return fig
