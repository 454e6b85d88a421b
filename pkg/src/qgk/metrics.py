"""Diagnostics: global entanglement, spectral expressibility, parameter
counts and the structural quantities behind the grouping bounds."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import rng
from .embedding import EmbeddingConfig, embed_batch
from .grouping import VggSet
from .kernels import gram, spectral_concentration
from .linalg import partial_trace_single_qubit
from .projection import ProjectionParams

ENTANGLEMENT_SAMPLES = 200
EXPRESSIBILITY_SAMPLES = 128
SAMPLE_RANGE = (-np.pi, np.pi)


def meyer_wallach(psi: np.ndarray, eta: int) -> float:
    """Average single-qubit purity deficit 2 (1 - mean_k Tr rho_k^2).

    Zero exactly on product states, one on globally entangled states such as
    Bell pairs and GHZ states.
    """
    psi = np.asarray(psi, dtype=np.complex128)
    if abs(np.linalg.norm(psi) - 1.0) > 1e-8:
        raise ValueError("state is not normalised")
    purity_sum = 0.0
    for k in range(eta):
        rho = partial_trace_single_qubit(psi, k, eta)
        purity_sum += float(np.real(np.trace(rho @ rho)))
    return 2.0 * (1.0 - purity_sum / eta)


@dataclass(frozen=True)
class EntanglementStats:
    mean: float
    max: float
    std: float
    samples: np.ndarray


def entanglement_capability(
    vgg: VggSet,
    embed_config: EmbeddingConfig = EmbeddingConfig(),
    n_samples: int = ENTANGLEMENT_SAMPLES,
    seed: int = 0,
    sample_range: tuple[float, float] = SAMPLE_RANGE,
) -> EntanglementStats:
    """Entanglement statistics over uniformly sampled parameter vectors."""
    if n_samples < 1:
        raise ValueError("need at least one sample")
    gen = rng.stream(seed, "entanglement")
    phis = gen.uniform(sample_range[0], sample_range[1], size=(n_samples, vgg.groups))
    states = embed_batch(vgg, phis, embed_config)
    values = np.array([meyer_wallach(state, vgg.eta) for state in states])
    return EntanglementStats(
        mean=float(values.mean()), max=float(values.max()), std=float(values.std()), samples=values
    )


def expressibility(
    vgg: VggSet,
    embed_config: EmbeddingConfig = EmbeddingConfig(),
    n_samples: int = EXPRESSIBILITY_SAMPLES,
    seed: int = 0,
    sample_range: tuple[float, float] = SAMPLE_RANGE,
) -> float:
    """Spectral concentration of the kernel over sampled parameter vectors.

    Lower is more expressive; the value lies in [0, log n].
    """
    if n_samples < 4:
        raise ValueError("need at least four samples")
    gen = rng.stream(seed, "expressibility")
    phis = gen.uniform(sample_range[0], sample_range[1], size=(n_samples, vgg.groups))
    states = embed_batch(vgg, phis, embed_config)
    return spectral_concentration(gram(states))


def parameter_count(eta: int, method: str = "qgk") -> int:
    """Free parameters per encoding family.

    Generator encoding carries 4^eta - 1, amplitude encoding 2^(eta+1) - 1,
    per-qubit angle encoding eta.
    """
    if method == "qgk":
        return 4**eta - 1
    if method == "amplitude":
        return 2 ** (eta + 1) - 1
    if method == "angle":
        return eta
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class BoundReport:
    """Structural sums controlling the kernel-spectrum bounds.

    The unweighted quantities depend on group sizes only; the reweighted
    variants scale each group by its extractor row weight |W_i|^2 and reduce
    to the unweighted sums at unit row norms.
    """

    size_sum: int
    balance_sq: float
    size_sq_sum: int
    anisotropy_ratio: float
    row_weights: np.ndarray | None = None
    rw_size_sum: float | None = None
    rw_balance_sq: float | None = None
    rw_size_sq_sum: float | None = None
    rw_anisotropy_ratio: float | None = None


def bound_report(vgg: VggSet, params: ProjectionParams | None = None) -> BoundReport:
    sizes = vgg.group_sizes().astype(np.float64)
    size_sum = int(sizes.sum())
    balance_sq = float(np.sum(np.sqrt(sizes)) ** 2)
    size_sq_sum = int(np.sum(sizes**2))
    ratio = size_sq_sum / size_sum
    if params is None:
        return BoundReport(size_sum, balance_sq, size_sq_sum, ratio)
    if params.groups != vgg.groups:
        raise ValueError(f"extractor has {params.groups} rows, grouping has {vgg.groups}")
    weights = np.sum(params.w**2, axis=1)
    rw_size_sum = float(np.sum(sizes * weights))
    rw_balance_sq = float(np.sum(np.sqrt(sizes) * np.sqrt(weights)) ** 2)
    rw_size_sq_sum = float(np.sum(sizes**2 * weights**2))
    rw_ratio = rw_size_sq_sum / rw_size_sum if rw_size_sum > 0 else float("nan")
    return BoundReport(
        size_sum,
        balance_sq,
        size_sq_sum,
        ratio,
        row_weights=weights,
        rw_size_sum=rw_size_sum,
        rw_balance_sq=rw_balance_sq,
        rw_size_sq_sum=rw_size_sq_sum,
        rw_anisotropy_ratio=rw_ratio,
    )


@dataclass(frozen=True)
class MetricsReport:
    """One diagnostic row for a grouping configuration."""

    eta: int
    scaling: str
    width: float
    groups: int
    parameter_count: int
    entanglement: EntanglementStats
    expressibility: float
    bounds: BoundReport
    n_entanglement_samples: int
    n_expressibility_samples: int
    seed: int
    sample_low: float
    sample_high: float

    def to_kv(self) -> dict[str, str]:
        return {
            "eta": str(self.eta),
            "scaling": self.scaling,
            "width": f"{self.width:g}",
            "groups": str(self.groups),
            "parameter_count": str(self.parameter_count),
            "entanglement_mean": f"{self.entanglement.mean:.17g}",
            "entanglement_max": f"{self.entanglement.max:.17g}",
            "entanglement_std": f"{self.entanglement.std:.17g}",
            "expressibility": f"{self.expressibility:.17g}",
            "size_sum": str(self.bounds.size_sum),
            "balance_sq": f"{self.bounds.balance_sq:.17g}",
            "size_sq_sum": str(self.bounds.size_sq_sum),
            "anisotropy_ratio": f"{self.bounds.anisotropy_ratio:.17g}",
            "n_entanglement_samples": str(self.n_entanglement_samples),
            "n_expressibility_samples": str(self.n_expressibility_samples),
            "seed": str(self.seed),
            "sample_low": f"{self.sample_low:.17g}",
            "sample_high": f"{self.sample_high:.17g}",
        }


def report_for(
    vgg: VggSet,
    embed_config: EmbeddingConfig = EmbeddingConfig(),
    n_entanglement: int = ENTANGLEMENT_SAMPLES,
    n_expressibility: int = EXPRESSIBILITY_SAMPLES,
    seed: int = 0,
    sample_range: tuple[float, float] = SAMPLE_RANGE,
) -> MetricsReport:
    """Run the full diagnostic suite for one grouping configuration."""
    ent = entanglement_capability(vgg, embed_config, n_entanglement, seed, sample_range)
    expr = expressibility(vgg, embed_config, n_expressibility, seed, sample_range)
    return MetricsReport(
        eta=vgg.eta,
        scaling=vgg.config.scaling.value,
        width=vgg.config.resolved_width,
        groups=vgg.groups,
        parameter_count=parameter_count(vgg.eta, "qgk"),
        entanglement=ent,
        expressibility=expr,
        bounds=bound_report(vgg),
        n_entanglement_samples=n_entanglement,
        n_expressibility_samples=n_expressibility,
        seed=seed,
        sample_low=sample_range[0],
        sample_high=sample_range[1],
    )


def export_report(report: MetricsReport, path_prefix: str | Path) -> None:
    """Write ``<prefix>.txt`` (key=value) and ``<prefix>-q.csv`` (per-sample Q)."""
    prefix = Path(path_prefix)
    with Path(f"{prefix}.txt").open("w") as fh:
        for key, value in report.to_kv().items():
            fh.write(f"{key}={value}\n")
    with Path(f"{prefix}-q.csv").open("w") as fh:
        fh.write("sample,q\n")
        for i, q in enumerate(report.entanglement.samples):
            fh.write(f"{i},{q:.17g}\n")
