"""Figure rendering for run directories.

All plots go straight to files through the Agg backend; nothing here opens a
window.  Figures sit alongside metrics.csv so a run directory is a complete,
self-describing record.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_metrics_figure(rows, path) -> None:
    """Plot the per-epoch metric curves in a 2x2 panel figure."""
    if not rows:
        raise ValueError("render_metrics_figure: need at least one row")
    epochs = [r.epoch for r in rows]
    fig, axes = plt.subplots(2, 2, figsize=(10, 7))

    ax = axes[0, 0]
    ax.plot(epochs, [r.cost for r in rows], label="cost")
    ax.plot(epochs, [r.mse for r in rows], label="mse")
    ax.set_xlabel("epoch")
    ax.legend()
    ax.set_title("cost and reconstruction")

    ax = axes[0, 1]
    ax.plot(epochs, [r.sliced_penalty for r in rows], color="tab:red")
    ax.set_xlabel("epoch")
    ax.set_yscale("log")
    ax.set_title("sliced penalty")

    ax = axes[1, 0]
    ax.plot(epochs, [r.mardia_skewness for r in rows], label="skewness")
    ax.plot(epochs, [r.mardia_kurtosis_normalized for r in rows], label="kurtosis (normalized)")
    ax.set_xlabel("epoch")
    ax.legend()
    ax.set_title("latent normality")

    ax = axes[1, 1]
    ax.plot(epochs, [r.sw_monitor for r in rows], label="sw monitor")
    ax.plot(epochs, [r.gfd_proxy for r in rows], label="gaussian frechet")
    ax.set_xlabel("epoch")
    ax.set_yscale("log")
    ax.legend()
    ax.set_title("distribution monitors")

    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def render_scatter(data, generated, path) -> None:
    """Overlay 2-D test points and decoded prior samples."""
    data = np.asarray(data)
    generated = np.asarray(generated)
    if data.shape[1] != 2 or generated.shape[1] != 2:
        raise ValueError("render_scatter: wants 2-D point sets")
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.scatter(data[:, 0], data[:, 1], s=8, alpha=0.5, label="data")
    ax.scatter(generated[:, 0], generated[:, 1], s=8, alpha=0.5, label="generated")
    ax.legend()
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def render_latent(latents, path) -> None:
    """Scatter a 2-D latent batch against the unit-circle reference."""
    latents = np.asarray(latents)
    if latents.shape[1] != 2:
        raise ValueError("render_latent: wants a 2-D latent batch")
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.scatter(latents[:, 0], latents[:, 1], s=8, alpha=0.5)
    theta = np.linspace(0.0, 2.0 * np.pi, 200)
    for r in (1.0, 2.0):
        ax.plot(r * np.cos(theta), r * np.sin(theta), color="gray", lw=0.8)
    ax.set_aspect("equal")
    ax.set_title("latent batch (circles at 1 and 2 std)")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
