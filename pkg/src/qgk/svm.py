"""Dual support vector machine over precomputed kernels.

Pairwise coordinate ascent on the dual with box constraints and the equality
constraint maintained exactly by every update. Working pairs come from a
first-order violation scan in a fixed order, so training is reproducible
without any random source. Multiclass problems train one-vs-rest machines on
the shared Gram matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .kernels import KernelMatrix

_MIN_STEP = 1e-12


@dataclass
class BinaryMachine:
    """Dual solution of one two-class problem."""

    support_idx: np.ndarray   # indices into the training set
    coef: np.ndarray          # alpha_i * y_i at the support indices
    bias: float
    converged: bool
    objective: float
    objective_history: list[float] = field(default_factory=list)


@dataclass
class SvmModel:
    classes: np.ndarray
    machines: list[BinaryMachine]
    c: float
    tol: float
    train_accuracy: float = 0.0

    @property
    def converged(self) -> bool:
        return all(m.converged for m in self.machines)


def _dual_objective(alpha: np.ndarray, q: np.ndarray) -> float:
    return float(alpha.sum() - 0.5 * alpha @ q @ alpha)


def _smo(
    kernel: np.ndarray,
    y: np.ndarray,
    c: float,
    tol: float,
    max_passes: int,
    track_objective: bool,
) -> BinaryMachine:
    n = y.shape[0]
    alpha = np.zeros(n)
    bias = 0.0
    f = np.zeros(n)  # decision values sum_j alpha_j y_j K_ij + bias
    q = (y[:, None] * y[None, :]) * kernel if track_objective else None
    history: list[float] = []
    if track_objective:
        history.append(_dual_objective(alpha, q))

    def violates(i: int) -> bool:
        margin = y[i] * f[i]
        if alpha[i] < c - _MIN_STEP and margin < 1.0 - tol:
            return True
        return alpha[i] > _MIN_STEP and margin > 1.0 + tol

    def try_pair(i: int, j: int) -> bool:
        nonlocal bias
        if i == j:
            return False
        kappa = kernel[i, i] + kernel[j, j] - 2.0 * kernel[i, j]
        if kappa <= _MIN_STEP:
            return False
        e_i = f[i] - y[i]
        e_j = f[j] - y[j]
        old_i, old_j = alpha[i], alpha[j]
        if y[i] == y[j]:
            low, high = max(0.0, old_i + old_j - c), min(c, old_i + old_j)
        else:
            low, high = max(0.0, old_j - old_i), min(c, c + old_j - old_i)
        if high - low < _MIN_STEP:
            return False
        new_j = np.clip(old_j + y[j] * (e_i - e_j) / kappa, low, high)
        if abs(new_j - old_j) < _MIN_STEP:
            return False
        new_i = old_i + y[i] * y[j] * (old_j - new_j)
        alpha[i], alpha[j] = new_i, new_j
        d_i = y[i] * (new_i - old_i)
        d_j = y[j] * (new_j - old_j)
        b1 = bias - e_i - d_i * kernel[i, i] - d_j * kernel[i, j]
        b2 = bias - e_j - d_i * kernel[i, j] - d_j * kernel[j, j]
        if _MIN_STEP < new_i < c - _MIN_STEP:
            new_bias = b1
        elif _MIN_STEP < new_j < c - _MIN_STEP:
            new_bias = b2
        else:
            new_bias = (b1 + b2) / 2.0
        f[:] += d_i * kernel[:, i] + d_j * kernel[:, j] + (new_bias - bias)
        bias = new_bias
        if track_objective:
            history.append(_dual_objective(alpha, q))
        return True

    converged = False
    for _ in range(max_passes):
        changed = 0
        for i in range(n):
            if not violates(i):
                continue
            gaps = np.abs((f[i] - y[i]) - (f - y))
            gaps[i] = -1.0
            for j in np.argsort(-gaps, kind="stable"):
                if gaps[j] < 0:
                    break
                if try_pair(i, int(j)):
                    changed += 1
                    break
        if changed == 0:
            converged = True
            break
    support = np.flatnonzero(alpha > _MIN_STEP)
    q_full = (y[:, None] * y[None, :]) * kernel
    return BinaryMachine(
        support_idx=support,
        coef=alpha[support] * y[support],
        bias=bias,
        converged=converged,
        objective=_dual_objective(alpha, q_full),
        objective_history=history,
    )


def fit(
    kernel: KernelMatrix | np.ndarray,
    labels,
    c: float = 1.0,
    tol: float = 1e-3,
    max_passes: int | None = None,
    track_objective: bool = False,
) -> SvmModel:
    """Train on a precomputed square kernel.

    Two classes produce one machine (smaller class label mapped to -1);
    more produce one machine per class against the rest. ``max_passes``
    defaults to 10n full sweeps; a model that hits the cap is flagged
    unconverged rather than raising.
    """
    k = kernel.values if isinstance(kernel, KernelMatrix) else np.asarray(kernel, dtype=np.float64)
    labels = np.asarray(labels)
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise ValueError(f"kernel must be square, got shape {k.shape}")
    if labels.shape[0] != k.shape[0]:
        raise ValueError("label count does not match kernel size")
    classes = np.unique(labels)
    if classes.shape[0] < 2:
        raise ValueError("need at least two classes")
    n = labels.shape[0]
    if max_passes is None:
        max_passes = 10 * n
    machines = []
    if classes.shape[0] == 2:
        y = np.where(labels == classes[1], 1.0, -1.0)
        machines.append(_smo(k, y, c, tol, max_passes, track_objective))
    else:
        for cls in classes:
            y = np.where(labels == cls, 1.0, -1.0)
            machines.append(_smo(k, y, c, tol, max_passes, track_objective))
    model = SvmModel(classes=classes, machines=machines, c=c, tol=tol)
    model.train_accuracy = float(np.mean(predict(model, k) == labels))
    return model


def decision_values(model: SvmModel, kernel_block: np.ndarray) -> np.ndarray:
    """Raw decision values, one column per machine; columns = training order."""
    block = np.asarray(kernel_block, dtype=np.float64)
    out = np.empty((block.shape[0], len(model.machines)))
    for col, machine in enumerate(model.machines):
        out[:, col] = block[:, machine.support_idx] @ machine.coef + machine.bias
    return out


def predict(model: SvmModel, kernel_block: KernelMatrix | np.ndarray) -> np.ndarray:
    """Labels for a rectangular test-vs-train kernel block.

    Binary: the sign of the single decision value (ties go to the positive
    class). Multiclass: argmax of the one-vs-rest values, ties broken by the
    lowest class index.
    """
    block = kernel_block.values if isinstance(kernel_block, KernelMatrix) else np.asarray(kernel_block)
    values = decision_values(model, block)
    if len(model.machines) == 1:
        return np.where(values[:, 0] >= 0.0, model.classes[1], model.classes[0])
    return model.classes[np.argmax(values, axis=1)]


def save_model(model: SvmModel, path: str | Path) -> None:
    """Text checkpoint: hyperparameters, classes, then per-machine data."""
    with Path(path).open("w") as fh:
        fh.write(f"C={model.c:.17g}\n")
        fh.write(f"tol={model.tol:.17g}\n")
        fh.write("classes=" + " ".join(str(int(cls)) for cls in model.classes) + "\n")
        for machine in model.machines:
            fh.write("machine\n")
            fh.write("support=" + " ".join(str(int(i)) for i in machine.support_idx) + "\n")
            fh.write("coef=" + " ".join(f"{v:.17g}" for v in machine.coef) + "\n")
            fh.write(f"bias={machine.bias:.17g}\n")
            fh.write(f"converged={int(machine.converged)}\n")
            fh.write(f"objective={machine.objective:.17g}\n")


def load_model(path: str | Path) -> SvmModel:
    lines = Path(path).read_text().splitlines()
    c = float(lines[0].split("=", 1)[1])
    tol = float(lines[1].split("=", 1)[1])
    classes = np.array([int(tok) for tok in lines[2].split("=", 1)[1].split()])
    machines = []
    idx = 3
    while idx < len(lines):
        assert lines[idx] == "machine"
        support = np.array([int(tok) for tok in lines[idx + 1].split("=", 1)[1].split()], dtype=int)
        coef = np.array([float(tok) for tok in lines[idx + 2].split("=", 1)[1].split()])
        bias = float(lines[idx + 3].split("=", 1)[1])
        converged = bool(int(lines[idx + 4].split("=", 1)[1]))
        objective = float(lines[idx + 5].split("=", 1)[1])
        machines.append(BinaryMachine(support, coef, bias, converged, objective))
        idx += 6
    return SvmModel(classes=classes, machines=machines, c=c, tol=tol)
