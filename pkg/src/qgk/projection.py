"""Affine feature extractor phi = W x + b and its alignment-maximising trainer.

The kernel-target alignment loss is differentiated exactly through the
product-form embedding: each kernel entry K_ab = |<psi_b|psi_a>|^2 contributes
2 Re(conj(<psi_b|psi_a>) <psi_b|d psi_a / d phi_i>) per parameter, the
alignment quotient rule is applied in closed form, and the affine layer maps
parameter sensitivities back to W and b. Training uses Adam with a fixed seed
for bit-deterministic runs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import rng
from .embedding import EmbeddingConfig, EmbeddingMode, embed_batch, embed_with_gradient_batch
from .grouping import VggSet
from .kernels import TargetKernel, gram, kta, target_kernel

FULL_BATCH_LIMIT = 512
MINIBATCH_SIZE = 256


@dataclass
class ProjectionParams:
    """Trainable weights of the extractor: W is (g, d), b has length g."""

    w: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        self.w = np.asarray(self.w, dtype=np.float64)
        self.b = np.asarray(self.b, dtype=np.float64)
        if self.w.ndim != 2 or self.b.shape != (self.w.shape[0],):
            raise ValueError(f"inconsistent shapes: W {self.w.shape}, b {self.b.shape}")
        if not (np.all(np.isfinite(self.w)) and np.all(np.isfinite(self.b))):
            raise ValueError("parameters contain non-finite entries")

    @property
    def groups(self) -> int:
        return self.w.shape[0]

    @property
    def d(self) -> int:
        return self.w.shape[1]

    def copy(self) -> "ProjectionParams":
        return ProjectionParams(self.w.copy(), self.b.copy())


def default_learning_rate(eta: int) -> float:
    """Protocol rule: 10^-(eta-1)."""
    return 10.0 ** (-(eta - 1))


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 100
    learning_rate: float = 0.1
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    batch_size: int | None = None  # None: full batch up to FULL_BATCH_LIMIT, else minibatches
    seed: int = 0
    gradient_mode: str = "analytic"  # or "fd"
    fd_step: float = 1e-5
    target_scheme: str = "indicator"  # alignment target the trainer optimises

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.learning_rate <= 0.0:
            raise ValueError("learning rate must be positive")
        if self.gradient_mode not in ("analytic", "fd"):
            raise ValueError(f"unknown gradient mode {self.gradient_mode!r}")


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    loss: float
    alignment: float
    seconds: float


@dataclass
class TrainTrace:
    records: list[EpochRecord] = field(default_factory=list)

    def to_csv(self, path: str | Path) -> None:
        with Path(path).open("w") as fh:
            fh.write("epoch,loss,alignment,seconds\n")
            for r in self.records:
                fh.write(f"{r.epoch},{r.loss:.17g},{r.alignment:.17g},{r.seconds:.6f}\n")


def project(params: ProjectionParams, x: np.ndarray) -> np.ndarray:
    """Row-wise affine map: Phi_i = W x_i + b."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != params.d:
        raise ValueError(f"feature matrix has shape {x.shape}, expected (n, {params.d})")
    return x @ params.w.T + params.b


def init_params(d: int, g: int, seed: int = 0, scheme: str = "scaled_uniform") -> ProjectionParams:
    """Initial extractor weights.

    scaled_uniform draws W from U(+-sqrt(6/(d+g))) with b = 0; identity sets
    W = pi * I for the direct-embedding case and requires d == g.
    """
    if scheme == "scaled_uniform":
        limit = np.sqrt(6.0 / (d + g))
        gen = rng.stream(seed, "projection-init")
        w = gen.uniform(-limit, limit, size=(g, d))
        return ProjectionParams(w, np.zeros(g))
    if scheme == "identity":
        if d != g:
            raise ValueError(f"identity initialisation needs d == g, got d={d}, g={g}")
        return ProjectionParams(np.pi * np.eye(g), np.zeros(g))
    raise ValueError(f"unknown initialisation scheme {scheme!r}")


def kta_loss(
    params: ProjectionParams,
    x: np.ndarray,
    target: TargetKernel,
    vgg: VggSet,
    embed_config: EmbeddingConfig,
) -> float:
    """Alignment loss of the kernel induced by the current parameters."""
    states = embed_batch(vgg, project(params, x), embed_config)
    return kta(gram(states), target).loss


def kta_gradient(
    params: ProjectionParams,
    x: np.ndarray,
    labels: np.ndarray,
    vgg: VggSet,
    embed_config: EmbeddingConfig,
    target: TargetKernel | None = None,
    target_scheme: str = "indicator",
) -> tuple[np.ndarray, np.ndarray, float]:
    """Exact loss gradient with respect to W and b (product mode).

    Returns (dW, db, loss). The per-sample parameter sensitivities are
    D[a, i] = dL/dphi_i^(a); the affine layer then gives dW = D^T X and
    db = sum_a D[a].
    """
    if embed_config.mode is not EmbeddingMode.PRODUCT:
        raise ValueError("analytic gradients require product embedding mode")
    x = np.asarray(x, dtype=np.float64)
    if target is None:
        target = target_kernel(labels, scheme=target_scheme)
    y = target.values
    states, tangents = embed_with_gradient_batch(vgg, project(params, x), embed_config)
    overlaps = states @ states.conj().T          # overlaps[a, b] = <psi_b|psi_a>
    kernel = np.abs(overlaps) ** 2
    norm_k = np.linalg.norm(kernel)
    norm_y = np.linalg.norm(y)
    if norm_k == 0.0 or norm_y == 0.0:
        raise ValueError("degenerate input: zero Frobenius norm")
    inner = float(np.sum(kernel * y))
    loss = 1.0 - inner / (norm_k * norm_y)
    # dL/dK from the quotient rule, then chain through K = |G|^2
    dl_dk = (inner * kernel / norm_k**2 - y) / (norm_k * norm_y)
    weighted = dl_dk * np.conj(overlaps)
    costates = weighted @ states.conj()          # (n, dim)
    sensitivities = 4.0 * np.real(np.einsum("aik,ak->ai", tangents, costates))
    dw = sensitivities.T @ x
    db = sensitivities.sum(axis=0)
    return dw, db, loss


def finite_difference_gradient(
    params: ProjectionParams,
    x: np.ndarray,
    labels: np.ndarray,
    vgg: VggSet,
    embed_config: EmbeddingConfig,
    step: float = 1e-5,
    target: TargetKernel | None = None,
    target_scheme: str = "indicator",
) -> tuple[np.ndarray, np.ndarray, float]:
    """Central-difference gradient; the oracle for the analytic path and the
    only option for sum mode."""
    if target is None:
        target = target_kernel(labels, scheme=target_scheme)
    dw = np.zeros_like(params.w)
    db = np.zeros_like(params.b)
    work = params.copy()

    def loss_at() -> float:
        return kta_loss(work, x, target, vgg, embed_config)

    base = loss_at()
    for i in range(params.groups):
        for j in range(params.d):
            work.w[i, j] = params.w[i, j] + step
            up = loss_at()
            work.w[i, j] = params.w[i, j] - step
            down = loss_at()
            work.w[i, j] = params.w[i, j]
            dw[i, j] = (up - down) / (2.0 * step)
        work.b[i] = params.b[i] + step
        up = loss_at()
        work.b[i] = params.b[i] - step
        down = loss_at()
        work.b[i] = params.b[i]
        db[i] = (up - down) / (2.0 * step)
    return dw, db, base


class _Adam:
    def __init__(self, shape_w, shape_b, config: TrainConfig) -> None:
        self.config = config
        self.mw = np.zeros(shape_w)
        self.vw = np.zeros(shape_w)
        self.mb = np.zeros(shape_b)
        self.vb = np.zeros(shape_b)
        self.t = 0

    def step(self, params: ProjectionParams, dw: np.ndarray, db: np.ndarray) -> None:
        cfg = self.config
        self.t += 1
        self.mw = cfg.beta1 * self.mw + (1 - cfg.beta1) * dw
        self.vw = cfg.beta2 * self.vw + (1 - cfg.beta2) * dw**2
        self.mb = cfg.beta1 * self.mb + (1 - cfg.beta1) * db
        self.vb = cfg.beta2 * self.vb + (1 - cfg.beta2) * db**2
        correct1 = 1 - cfg.beta1**self.t
        correct2 = 1 - cfg.beta2**self.t
        params.w -= cfg.learning_rate * (self.mw / correct1) / (np.sqrt(self.vw / correct2) + cfg.epsilon)
        params.b -= cfg.learning_rate * (self.mb / correct1) / (np.sqrt(self.vb / correct2) + cfg.epsilon)


def train(
    params: ProjectionParams,
    x: np.ndarray,
    labels: np.ndarray,
    vgg: VggSet,
    embed_config: EmbeddingConfig,
    config: TrainConfig,
) -> tuple[ProjectionParams, TrainTrace]:
    """Adam on the alignment loss; deterministic for a fixed seed.

    Full batch when n <= 512 (or when batch_size covers the data), otherwise
    shuffled minibatches with per-batch target kernels. Each trace row holds
    the loss evaluated at the start of that epoch's update. Aborts on a
    non-finite loss.
    """
    x = np.asarray(x, dtype=np.float64)
    labels = np.asarray(labels)
    n = x.shape[0]
    if n < 2:
        raise ValueError("training needs at least two samples")
    params = params.copy()
    batch = config.batch_size
    if batch is None:
        batch = n if n <= FULL_BATCH_LIMIT else MINIBATCH_SIZE
    batch = min(batch, n)
    full_target = target_kernel(labels, scheme=config.target_scheme) if batch >= n else None
    adam = _Adam(params.w.shape, params.b.shape, config)
    trace = TrainTrace()

    def gradient(bx, by, btarget):
        if config.gradient_mode == "analytic":
            return kta_gradient(
                params, bx, by, vgg, embed_config,
                target=btarget, target_scheme=config.target_scheme,
            )
        return finite_difference_gradient(
            params, bx, by, vgg, embed_config,
            step=config.fd_step, target=btarget, target_scheme=config.target_scheme,
        )

    for epoch in range(1, config.epochs + 1):
        started = time.perf_counter()
        if batch >= n:
            dw, db, loss = gradient(x, labels, full_target)
            if not np.isfinite(loss):
                raise RuntimeError(f"non-finite loss at epoch {epoch}; aborting")
            adam.step(params, dw, db)
            losses = [loss]
        else:
            order = rng.stream(config.seed, f"batches-{epoch}").permutation(n)
            losses = []
            for start in range(0, n, batch):
                chosen = order[start : start + batch]
                if np.unique(labels[chosen]).shape[0] < 2:
                    continue  # degenerate single-class batch
                dw, db, loss = gradient(x[chosen], labels[chosen], None)
                if not np.isfinite(loss):
                    raise RuntimeError(f"non-finite loss at epoch {epoch}; aborting")
                adam.step(params, dw, db)
                losses.append(loss)
            if not losses:
                raise RuntimeError(f"epoch {epoch}: every batch was single-class")
        mean_loss = float(np.mean(losses))
        trace.records.append(
            EpochRecord(
                epoch=epoch,
                loss=mean_loss,
                alignment=1.0 - mean_loss,
                seconds=time.perf_counter() - started,
            )
        )
    return params, trace


def save_params(params: ProjectionParams, path: str | Path, seed: int = 0, epoch: int = 0) -> None:
    """Checkpoint: one header line ``d g seed epoch`` then W rows then b."""
    with Path(path).open("w") as fh:
        fh.write(f"{params.d} {params.groups} {seed} {epoch}\n")
        for row in params.w:
            fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")
        fh.write(" ".join(f"{v:.17g}" for v in params.b) + "\n")


def load_params(path: str | Path) -> tuple[ProjectionParams, int, int]:
    lines = Path(path).read_text().splitlines()
    d, g, seed, epoch = (int(tok) for tok in lines[0].split())
    w = np.array([[float(v) for v in lines[1 + i].split()] for i in range(g)])
    b = np.array([float(v) for v in lines[1 + g].split()])
    if w.shape != (g, d) or b.shape != (g,):
        raise ValueError(f"checkpoint shape mismatch in {path}")
    return ProjectionParams(w, b), seed, epoch
