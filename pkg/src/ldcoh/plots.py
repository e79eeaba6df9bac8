"""Figure rendering for scan and sweep reports.

Figures are written next to the delimited output files by the CLI; the Agg
backend keeps rendering headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def save_scan_figure(points: np.ndarray, values: np.ndarray, path,
                     basis_points: np.ndarray | None = None) -> None:
    """Bloch-sphere scatter of the coherence landscape of pure states."""
    fig = plt.figure(figsize=(7, 6))
    ax = fig.add_subplot(projection="3d")
    sc = ax.scatter(
        points[:, 0], points[:, 1], points[:, 2],
        c=values, cmap="viridis", s=4, alpha=0.8, linewidths=0,
    )
    if basis_points is not None:
        ax.scatter(
            basis_points[:, 0], basis_points[:, 1], basis_points[:, 2],
            color="red", s=60, marker="*", label="basis states",
        )
        ax.legend(loc="upper left")
    fig.colorbar(sc, ax=ax, shrink=0.7, label="trace-norm coherence")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    ax.set_box_aspect((1, 1, 1))
    ax.set_title("Coherence over pure states")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_sweep_figure(rows: np.ndarray, path) -> None:
    """Scatter of distinguishability versus coherence with the C + D = 1 line."""
    fig, ax = plt.subplots(figsize=(6.5, 6))
    sc = ax.scatter(
        rows[:, 2], rows[:, 5], c=rows[:, 1], cmap="plasma", s=5, alpha=0.6,
        linewidths=0,
    )
    line = np.linspace(0.0, 1.0, 2)
    ax.plot(line, 1.0 - line, "k--", linewidth=1, label="C + D = 1")
    fig.colorbar(sc, ax=ax, label="R")
    ax.set_xlabel("coherence C")
    ax.set_ylabel("distinguishability D")
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="upper right")
    ax.set_title("Complementarity sweep")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
