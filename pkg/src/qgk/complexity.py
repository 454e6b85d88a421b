"""Abstract operation-count model and break-even analysis.

Cost of the simulated generator kernel for n samples of dimension d with g
groups on eta qubits, against the n^2 d cost of a classical Gram matrix.
Costs are bare operation counts with no constant factors; nothing here times
real code. The benchmark table evaluates train and test parts of a 90/10
split separately and sums them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .grouping import GroupScaling, group_count


@dataclass(frozen=True)
class CostModel:
    """Component costs of one kernel evaluation over n samples."""

    eta: int
    n: int
    d: int
    g: int
    generator: float   # basis construction, 4^eta
    projection: float  # affine features, n * gamma * g^2 = n * d * g
    embedding: float   # dense matrix exponentials, n * 8^eta
    gram: float        # batched fidelities, n^2 * 2^eta
    classical: float   # reference Gram cost, n^2 * d

    @property
    def gamma(self) -> float:
        return self.d / self.g

    @property
    def total(self) -> float:
        return self.generator + self.projection + self.embedding + self.gram


def qgk_cost(eta: int, n: int, d: int, g: int) -> CostModel:
    if min(eta, d, g) < 1 or n < 0:
        raise ValueError("eta, d, g must be positive and n non-negative")
    return CostModel(
        eta=eta,
        n=n,
        d=d,
        g=g,
        generator=float(4**eta),
        projection=float(n * d * g),
        embedding=float(n * 8**eta),
        gram=float(n * n * 2**eta),
        classical=float(n * n * d),
    )


@dataclass(frozen=True)
class Breakeven:
    """Quadratic-root threshold; ``feasible`` is False when the leading
    coefficient is non-negative and no finite break-even exists."""

    feasible: bool
    n_star: float  # inf when infeasible
    a: float
    b: float
    c: float


def breakeven_n(eta: int, gamma: float, g: int) -> Breakeven:
    """Dataset size beyond which the simulated kernel undercuts n^2 d.

    Solves n^2 (2^eta - gamma g) + n (gamma g^2 + 8^eta) + 4^eta < 0; with a
    negative leading coefficient the boundary is the more positive root.
    """
    a = float(2**eta - gamma * g)
    b = float(gamma * g**2 + 8**eta)
    c = float(4**eta)
    if a >= 0.0:
        return Breakeven(feasible=False, n_star=math.inf, a=a, b=b, c=c)
    disc = b * b - 4.0 * a * c
    n_star = (-b - math.sqrt(disc)) / (2.0 * a)
    return Breakeven(feasible=True, n_star=n_star, a=a, b=b, c=c)


@dataclass(frozen=True)
class EfficiencyBound:
    """Break-even dataset-to-dimension ratio for the exponential grouping."""

    eta: int
    gamma: float
    g: int
    d: float
    n_star: float
    exact: float    # n_star / d from the quadratic root
    approx: float   # closed-form (9 gamma 4^eta + 8^eta) / (3 gamma (3 gamma - 1) 4^eta)


def efficiency_bound(eta: int, gamma: float) -> EfficiencyBound:
    if not 2 <= eta <= 8:
        raise ValueError(f"eta must be in 2..8, got {eta}")
    g = group_count(eta, GroupScaling.EXPONENTIAL)
    d = gamma * g
    threshold = breakeven_n(eta, gamma, g)
    exact = threshold.n_star / d if threshold.feasible else math.inf
    approx = (9.0 * gamma * 4**eta + 8**eta) / (3.0 * gamma * (3.0 * gamma - 1.0) * 4**eta)
    return EfficiencyBound(
        eta=eta, gamma=gamma, g=g, d=d, n_star=threshold.n_star, exact=exact, approx=approx
    )


def compression_bound(eta: int) -> float:
    """Smallest compression factor guaranteeing a sub-unit efficiency bound."""
    if eta < 1:
        raise ValueError("eta must be positive")
    return 2.0 * math.sqrt(4.0 + 2**eta) / 3.0


@dataclass(frozen=True)
class BenchmarkRow:
    name: str
    eta: int
    d: int
    n: int
    g: int
    qgk_total: float
    classical_total: float


# The five reference configurations used throughout the toolkit.
DEFAULT_BENCHMARKS: tuple[tuple[str, int, int, int, int], ...] = (
    ("moons", 2, 2, 200, 15),
    ("circles", 2, 2, 200, 15),
    ("bank", 2, 16, 200, 15),
    ("mnist", 5, 784, 1000, 93),
    ("cifar10", 5, 3072, 1000, 93),
)


def benchmark_cost(
    name: str, eta: int, d: int, n: int, g: int, train_fraction: float = 0.9
) -> BenchmarkRow:
    """End-to-end cost of one benchmark under a train/test split.

    Both kernel evaluations of a run (the train Gram and the held-out part)
    are costed with the same model and summed, matching how the reference
    figures were produced.
    """
    n_train = round(train_fraction * n)
    n_test = n - n_train
    qgk_total = qgk_cost(eta, n_train, d, g).total + qgk_cost(eta, n_test, d, g).total
    classical = float(d * (n_train**2 + n_test**2))
    return BenchmarkRow(
        name=name, eta=eta, d=d, n=n, g=g, qgk_total=qgk_total, classical_total=classical
    )


def benchmark_table(train_fraction: float = 0.9) -> list[BenchmarkRow]:
    return [benchmark_cost(*args, train_fraction=train_fraction) for args in DEFAULT_BENCHMARKS]


def efficiency_table(etas=range(2, 9), gammas=(1.0, None)) -> list[EfficiencyBound]:
    """Bounds for each (eta, gamma); gamma None means gamma = eta."""
    rows = []
    for eta in etas:
        for gamma in gammas:
            rows.append(efficiency_bound(eta, float(eta) if gamma is None else float(gamma)))
    return rows


def efficiency_csv(rows: list[EfficiencyBound]) -> str:
    lines = ["eta,gamma,g,n_star,eb_exact,eb_approx"]
    for r in rows:
        n_star = "never" if math.isinf(r.n_star) else f"{r.n_star:.6g}"
        exact = "never" if math.isinf(r.exact) else f"{r.exact:.6g}"
        lines.append(f"{r.eta},{r.gamma:g},{r.g},{n_star},{exact},{r.approx:.6g}")
    return "\n".join(lines) + "\n"


def benchmark_csv(rows: list[BenchmarkRow]) -> str:
    lines = ["name,eta,d,n,g,qgk_total,classical_total"]
    for r in rows:
        lines.append(
            f"{r.name},{r.eta},{r.d},{r.n},{r.g},{r.qgk_total:.6g},{r.classical_total:.6g}"
        )
    return "\n".join(lines) + "\n"
