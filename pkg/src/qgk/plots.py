"""Figure rendering for the CLI report paths (written next to the CSVs)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_dataset(x: np.ndarray, y: np.ndarray, title: str, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(5, 4))
    for cls in np.unique(y):
        pts = x[y == cls]
        ax.scatter(pts[:, 0], pts[:, 1], s=12, label=f"class {cls}")
    ax.set_xlabel("f0")
    ax.set_ylabel("f1")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_kernel(values: np.ndarray, title: str, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(5, 4))
    im = ax.imshow(values, cmap="viridis", interpolation="nearest")
    fig.colorbar(im, ax=ax)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_training_curves(traces: dict[int, list[tuple[int, float]]], path: Path) -> None:
    """Alignment-vs-epoch lines, one per seed, with the seed mean in bold."""
    fig, ax = plt.subplots(figsize=(6, 4))
    all_curves = []
    for seed, rows in sorted(traces.items()):
        epochs = [e for e, _ in rows]
        values = [v for _, v in rows]
        all_curves.append(values)
        ax.plot(epochs, values, alpha=0.4, linewidth=0.8, label=f"seed {seed}")
    if all_curves and len({len(c) for c in all_curves}) == 1:
        mean = np.mean(np.array(all_curves), axis=0)
        ax.plot(range(1, len(mean) + 1), mean, color="black", linewidth=2.0, label="mean")
    ax.set_xlabel("epoch")
    ax.set_ylabel("alignment")
    ax.set_title("alignment during pre-training")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_metric_sweep(rows: list[dict], value_key: str, ylabel: str, path: Path) -> None:
    """One line per (scaling, width) across qubit counts."""
    fig, ax = plt.subplots(figsize=(6, 4))
    combos = sorted({(r["scaling"], r["width"]) for r in rows})
    for scaling, width in combos:
        pts = sorted(
            (int(r["eta"]), float(r[value_key]))
            for r in rows
            if r["scaling"] == scaling and r["width"] == width
        )
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o",
                label=f"{scaling}, w={width}")
    ax.set_xlabel("qubits")
    ax.set_ylabel(ylabel)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_breakeven(curves: dict[str, list], path: Path) -> None:
    """Efficiency-bound curves, one per labelled compression rule (log scale)."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, rows in curves.items():
        pts = sorted((r.eta, r.exact) for r in rows)
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=label)
    ax.axhline(1.0, color="grey", linewidth=0.8, linestyle="--")
    ax.set_yscale("log")
    ax.set_xlabel("qubits")
    ax.set_ylabel("break-even n/d")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
