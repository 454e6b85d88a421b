"""Fidelity Gram matrices, alignment scoring, targets and classical baselines."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .embedding import EmbeddedState


@dataclass(frozen=True)
class KernelMatrix:
    """Symmetric kernel values with a provenance record.

    Quantum (fidelity) kernels have unit diagonal, entries in [0, 1] and are
    positive semidefinite; classical kernels are unrestricted real symmetric.
    """

    values: np.ndarray
    provenance: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class TargetKernel:
    """Label-derived target with unit diagonal."""

    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]


def _values(k) -> np.ndarray:
    return k.values if hasattr(k, "values") else np.asarray(k, dtype=np.float64)


def _state_matrix(states) -> np.ndarray:
    if isinstance(states, np.ndarray):
        mat = states
    else:
        mat = np.stack([s.psi if isinstance(s, EmbeddedState) else np.asarray(s) for s in states])
    if mat.ndim != 2:
        raise ValueError(f"expected a batch of state vectors, got shape {mat.shape}")
    return mat.astype(np.complex128, copy=False)


def gram(states: Sequence[EmbeddedState] | np.ndarray, provenance: dict | None = None) -> KernelMatrix:
    """Pairwise fidelities |<psi_j|psi_i>|^2 as one batched product.

    The n x dim state matrix is multiplied with its adjoint and squared
    elementwise, so the cost is O(n^2 2^eta) rather than per-pair circuits.
    """
    mat = _state_matrix(states)
    if mat.shape[0] == 0:
        raise ValueError("empty state batch")
    overlaps = mat @ mat.conj().T
    values = np.abs(overlaps) ** 2
    if provenance is None and not isinstance(states, np.ndarray) and len(states) > 0:
        first = states[0]
        if isinstance(first, EmbeddedState):
            provenance = {
                "family": "qgk",
                "eta": str(first.eta),
                "mode": first.config.mode.value,
                "initial_state": first.config.initial_state.value,
            }
    return KernelMatrix(values=values, provenance=provenance or {})


def cross_gram(
    states_a: Sequence[EmbeddedState] | np.ndarray,
    states_b: Sequence[EmbeddedState] | np.ndarray,
) -> np.ndarray:
    """Rectangular fidelity block |<psi_b_j|psi_a_i>|^2 of shape (n_a, n_b)."""
    a = _state_matrix(states_a)
    b = _state_matrix(states_b)
    if a.shape[1] != b.shape[1]:
        raise ValueError("state batches have mismatched dimensions")
    return np.abs(a @ b.conj().T) ** 2


class KtaScore(NamedTuple):
    alignment: float
    loss: float


def kta(kernel, target) -> KtaScore:
    """Alignment Tr(K Y) / (|K|_F |Y|_F) and its loss 1 - alignment."""
    k = _values(kernel)
    y = _values(target)
    if k.shape != y.shape:
        raise ValueError(f"kernel {k.shape} and target {y.shape} differ in shape")
    norm_k = np.linalg.norm(k)
    norm_y = np.linalg.norm(y)
    if norm_k == 0.0 or norm_y == 0.0:
        raise ValueError("degenerate input: zero Frobenius norm")
    alignment = float(np.sum(k * y) / (norm_k * norm_y))
    return KtaScore(alignment=alignment, loss=1.0 - alignment)


def target_kernel(labels, scheme: str = "auto") -> TargetKernel:
    """Label-derived target.

    binary: Y_ij = y_i y_j with classes mapped to -1/+1 (ascending order).
    multiclass: Y_ij = 1 for equal labels, else -1/(C-1), which zero-means the
    rows for balanced data. indicator: 1 for equal labels, 0 otherwise — the
    variant the alignment trainer optimises against, since fidelity kernels
    are non-negative and can align fully with it (a +-1 target caps their
    alignment at 1/sqrt(2) on balanced data). "auto" picks binary for two
    classes, multiclass otherwise.
    """
    labels = np.asarray(labels)
    if labels.ndim != 1 or labels.shape[0] < 2:
        raise ValueError("need at least two labelled samples")
    classes = np.unique(labels)
    if classes.shape[0] < 2:
        raise ValueError("target kernel requires at least two classes")
    if scheme == "auto":
        scheme = "binary" if classes.shape[0] == 2 else "multiclass"
    if scheme == "binary":
        if classes.shape[0] != 2:
            raise ValueError(f"binary scheme needs exactly two classes, got {classes.shape[0]}")
        signs = np.where(labels == classes[1], 1.0, -1.0)
        return TargetKernel(np.outer(signs, signs))
    if scheme == "multiclass":
        same = labels[:, None] == labels[None, :]
        off = -1.0 / (classes.shape[0] - 1)
        return TargetKernel(np.where(same, 1.0, off))
    if scheme == "indicator":
        same = labels[:, None] == labels[None, :]
        return TargetKernel(same.astype(np.float64))
    raise ValueError(f"unknown target scheme {scheme!r}")


def classical_kernel(
    x: np.ndarray,
    family: str = "rbf",
    gamma: float | None = None,
    x2: np.ndarray | None = None,
) -> KernelMatrix:
    """RBF or linear Gram matrix; pass ``x2`` for a rectangular block.

    The RBF bandwidth defaults to the scale heuristic 1 / (d * Var(x)).
    """
    x = np.asarray(x, dtype=np.float64)
    other = x if x2 is None else np.asarray(x2, dtype=np.float64)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(other))):
        raise ValueError("features contain non-finite entries")
    if family == "linear":
        values = x @ other.T
        return KernelMatrix(values, {"family": "linear"})
    if family == "rbf":
        if gamma is None:
            variance = float(x.var())
            gamma = 1.0 / (x.shape[1] * variance) if variance > 0 else 1.0
        sq = (
            np.sum(x**2, axis=1)[:, None]
            + np.sum(other**2, axis=1)[None, :]
            - 2.0 * (x @ other.T)
        )
        values = np.exp(-gamma * np.maximum(sq, 0.0))
        return KernelMatrix(values, {"family": "rbf", "gamma": f"{gamma:.17g}"})
    raise ValueError(f"unknown kernel family {family!r}")


def spectral_concentration(kernel) -> float:
    """Divergence of the normalised kernel spectrum from uniform.

    Eigenvalues are clipped at zero and scaled to sum to one; the score is
    sum lambda_i log(n lambda_i) with 0 log 0 = 0, so it lies in [0, log n].
    Low values mean a dispersed spectrum (an expressive kernel).
    """
    k = _values(kernel)
    eigenvalues = np.linalg.eigvalsh((k + k.T) / 2.0)
    eigenvalues = np.clip(eigenvalues, 0.0, None)
    total = eigenvalues.sum()
    if total <= 0.0:
        raise ValueError("kernel spectrum sums to zero")
    lam = eigenvalues / total
    n = lam.shape[0]
    positive = lam > 0.0
    return float(np.sum(lam[positive] * np.log(n * lam[positive])))


def save_kernel(kernel: KernelMatrix, path: str | Path) -> None:
    """Headerless square CSV at full precision plus a key=value sidecar."""
    path = Path(path)
    values = _values(kernel)
    with path.open("w") as fh:
        for row in values:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    meta = dict(kernel.provenance) if hasattr(kernel, "provenance") else {}
    meta["n"] = str(values.shape[0])
    with Path(str(path) + ".meta").open("w") as fh:
        for key in sorted(meta):
            fh.write(f"{key}={meta[key]}\n")


def load_kernel(path: str | Path) -> KernelMatrix:
    path = Path(path)
    values = np.loadtxt(path, delimiter=",", ndmin=2)
    provenance: dict = {}
    sidecar = Path(str(path) + ".meta")
    if sidecar.exists():
        for line in sidecar.read_text().splitlines():
            if re.fullmatch(r"[^=]+=.*", line):
                key, value = line.split("=", 1)
                provenance[key] = value
    provenance.pop("n", None)
    return KernelMatrix(values, provenance)
