"""Partition the generator basis into variational generator groups.

The basis is first reordered by interleaving the three families round-robin
(symmetric, antisymmetric, diagonal, skipping exhausted families), then a
width-controlled stride permutation is applied, and consecutive blocks of the
result are summed into one Hermitian group operator each. Every group operator
is eigendecomposed once at build time so embedding a sample costs matrix-vector
work only.

Stride selection: the target permutation floor(k * (w/eta) * g) is used when it
happens to be a bijection; otherwise the fallback k * 2^floor(log2((w/eta)*g))
mod |basis| applies, which is always bijective because 4^eta - 1 is odd. Width
w = 0 means the identity permutation (narrow grouping of nearby generators).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .generators import Family, GeneratorSet, generator_count, iter_generators
from .linalg import EigenDecomposition, hermitian_eig


class GroupScaling(Enum):
    LINEAR = "linear"          # g = eta
    QUADRATIC = "quadratic"    # g = eta^2
    EXPONENTIAL = "exponential"  # g = 3*2^eta - 6*(eta mod 2) + 3
    ALL = "all"                # g = 4^eta - 1, one generator per group
    EXPLICIT = "explicit"      # caller-chosen g, must divide 4^eta - 1


def generators_per_group(eta: int) -> int:
    """Group size Gamma under exponential scaling.

    Gamma_1 = Gamma_2 = 1; for larger eta it doubles and alternates +-1 with
    parity, which keeps g * Gamma = 4^eta - 1 exactly.
    """
    gamma = 1
    for k in range(3, eta + 1):
        gamma = 2 * gamma + (1 if k % 2 == 1 else -1)
    return gamma


def group_count(eta: int, scaling: GroupScaling, explicit: int | None = None) -> int:
    """Number of groups g for a scaling rule."""
    if scaling is GroupScaling.LINEAR:
        return eta
    if scaling is GroupScaling.QUADRATIC:
        return eta * eta
    if scaling is GroupScaling.EXPONENTIAL:
        return 3 * 2**eta - 6 * (eta % 2) + 3
    if scaling is GroupScaling.ALL:
        return generator_count(eta)
    if scaling is GroupScaling.EXPLICIT:
        if explicit is None or explicit < 1:
            raise ValueError("explicit scaling requires a positive group count")
        return explicit
    raise ValueError(f"unknown scaling {scaling!r}")


@dataclass(frozen=True)
class GroupingConfig:
    """How to split the basis: qubit count, scaling rule and stride width."""

    eta: int
    scaling: GroupScaling = GroupScaling.EXPONENTIAL
    width: float | None = None  # None means the wide default w = eta
    explicit_groups: int | None = None

    def __post_init__(self) -> None:
        w = self.resolved_width
        if not 0.0 <= w <= self.eta:
            raise ValueError(f"width must lie in [0, eta], got {w}")
        if self.scaling is GroupScaling.EXPLICIT and self.explicit_groups is None:
            raise ValueError("explicit scaling requires explicit_groups")

    @property
    def resolved_width(self) -> float:
        return float(self.eta) if self.width is None else float(self.width)

    @property
    def groups(self) -> int:
        return group_count(self.eta, self.scaling, self.explicit_groups)


@dataclass(frozen=True)
class VggSet:
    """Grouped generators: assignment, summed operators and their spectra."""

    config: GroupingConfig
    assignment: tuple[tuple[int, ...], ...]
    operators: tuple[np.ndarray, ...]
    eigs: tuple[EigenDecomposition, ...]
    permutation: np.ndarray
    base_order: np.ndarray = field(repr=False, default=None)

    @property
    def groups(self) -> int:
        return len(self.assignment)

    @property
    def eta(self) -> int:
        return self.config.eta

    @property
    def dim(self) -> int:
        return 2**self.config.eta

    def group_sizes(self) -> np.ndarray:
        return np.array([len(members) for members in self.assignment])


def _interleave_lanes(lanes: list[list[int]]) -> np.ndarray:
    order: list[int] = []
    cursor = [0] * len(lanes)
    remaining = sum(len(lane) for lane in lanes)
    while remaining:
        for pos, lane in enumerate(lanes):
            if cursor[pos] < len(lane):
                order.append(lane[cursor[pos]])
                cursor[pos] += 1
                remaining -= 1
    return np.array(order)


def _interleaved_order(gs: GeneratorSet) -> np.ndarray:
    """Round-robin over families S, A, D, skipping exhausted ones."""
    return _interleave_lanes(
        [gs.family_indices(f) for f in (Family.SYMMETRIC, Family.ANTISYMMETRIC, Family.DIAGONAL)]
    )


def _canonical_order(eta: int) -> np.ndarray:
    """Family-interleaved ordering computed from positions alone.

    In canonical set order the symmetric/antisymmetric pairs alternate first
    (even/odd positions) and the diagonal family fills the tail, so the lanes
    are known without touching any matrix.
    """
    pairs = 2 ** (eta - 1) * (2**eta - 1)
    sym = list(range(0, 2 * pairs, 2))
    anti = list(range(1, 2 * pairs, 2))
    diag = list(range(2 * pairs, 2 * pairs + 2**eta - 1))
    return _interleave_lanes([sym, anti, diag])


def stride_permutation(total: int, groups: int, width: float, eta: int) -> np.ndarray:
    """Width-controlled permutation of 0..total-1.

    width = 0 is the identity. Otherwise the target stride floor(k*(w/eta)*g)
    is kept if bijective; the power-of-two fallback stride (floored at 1) is
    used otherwise and is always a bijection since ``total`` is odd.
    """
    if width == 0.0:
        return np.arange(total)
    factor = (width / eta) * groups
    candidate = np.floor(np.arange(total) * factor).astype(int)
    if len(np.unique(candidate)) == total and candidate.max() == total - 1 and candidate.min() == 0:
        return candidate
    stride = 2 ** max(0, math.floor(math.log2(factor)))
    perm = (np.arange(total) * stride) % total
    if len(np.unique(perm)) != total:
        raise ValueError(f"stride {stride} is not bijective modulo {total}")
    return perm


def _group_sizes(total: int, groups: int, scaling: GroupScaling) -> list[int]:
    base, leftover = divmod(total, groups)
    if leftover == 0:
        return [base] * groups
    if scaling in (GroupScaling.LINEAR, GroupScaling.QUADRATIC):
        # leftovers go one each to the first groups, keeping sizes within +-1
        return [base + 1 if i < leftover else base for i in range(groups)]
    raise ValueError(
        f"group count {groups} does not divide basis size {total}; "
        "only linear/quadratic scalings distribute leftovers"
    )


def build_vgg_set(gs: GeneratorSet, config: GroupingConfig) -> VggSet:
    """Group the basis per ``config`` and eigendecompose each group operator."""
    if gs.eta != config.eta:
        raise ValueError(f"generator set eta={gs.eta} does not match config eta={config.eta}")
    total = len(gs.items)
    groups = config.groups
    if groups > total:
        raise ValueError(f"cannot form {groups} groups from {total} generators")
    base = _interleaved_order(gs)
    perm = stride_permutation(total, groups, config.resolved_width, config.eta)
    final_order = base[perm]
    sizes = _group_sizes(total, groups, config.scaling)
    assignment: list[tuple[int, ...]] = []
    operators: list[np.ndarray] = []
    offset = 0
    for size in sizes:
        members = tuple(int(m) for m in final_order[offset : offset + size])
        offset += size
        op = np.zeros((gs.dim, gs.dim), dtype=np.complex128)
        for m in members:
            op += gs.items[m].matrix
        assignment.append(members)
        operators.append(op)
    eigs = tuple(hermitian_eig(op) for op in operators)
    return VggSet(
        config=config,
        assignment=tuple(assignment),
        operators=tuple(operators),
        eigs=eigs,
        permutation=perm,
        base_order=base,
    )


def build_vgg_set_streaming(eta: int, config: GroupingConfig) -> VggSet:
    """Group without materialising the basis; peak memory is the g operators.

    Generators are produced one at a time and summed straight into their
    group operator, which makes eta = 7..8 feasible where the dense basis
    (4^eta - 1 matrices of size 2^eta) would not fit. The result matches
    ``build_vgg_set`` exactly.
    """
    if eta != config.eta:
        raise ValueError(f"eta={eta} does not match config eta={config.eta}")
    total = generator_count(eta)
    groups = config.groups
    if groups > total:
        raise ValueError(f"cannot form {groups} groups from {total} generators")
    base = _canonical_order(eta)
    perm = stride_permutation(total, groups, config.resolved_width, config.eta)
    final_order = base[perm]
    sizes = _group_sizes(total, groups, config.scaling)
    group_of = np.empty(total, dtype=int)
    assignment: list[tuple[int, ...]] = []
    offset = 0
    for group, size in enumerate(sizes):
        members = final_order[offset : offset + size]
        group_of[members] = group
        assignment.append(tuple(int(m) for m in members))
        offset += size
    dim = 2**eta
    operators = [np.zeros((dim, dim), dtype=np.complex128) for _ in range(groups)]
    for index, generator in enumerate(iter_generators(eta)):
        operators[group_of[index]] += generator.matrix
    eigs = tuple(hermitian_eig(op) for op in operators)
    return VggSet(
        config=config,
        assignment=tuple(assignment),
        operators=tuple(operators),
        eigs=eigs,
        permutation=perm,
        base_order=base,
    )


def assignment_matrix(vgg: VggSet) -> np.ndarray:
    """Binary membership matrix M, one column per group."""
    total = generator_count(vgg.eta)
    m = np.zeros((total, vgg.groups))
    for col, members in enumerate(vgg.assignment):
        m[list(members), col] = 1.0
    return m


def grouping_rank(vgg: VggSet) -> int:
    """Column rank of the assignment matrix; g for any strict partition."""
    return int(np.linalg.matrix_rank(assignment_matrix(vgg)))


@dataclass(frozen=True)
class FrobeniusReport:
    """Per-group Frobenius weight and the structural size sums."""

    fro_norms_sq: np.ndarray   # |H_i|_F^2 per group
    size_sum: int              # sum |G_i|
    balance_sq: float          # (sum sqrt|G_i|)^2
    size_sq_sum: int           # sum |G_i|^2


def frobenius_weights(vgg: VggSet) -> FrobeniusReport:
    sizes = vgg.group_sizes()
    fro = np.array([float(np.sum(np.abs(op) ** 2)) for op in vgg.operators])
    return FrobeniusReport(
        fro_norms_sq=fro,
        size_sum=int(sizes.sum()),
        balance_sq=float(np.sum(np.sqrt(sizes)) ** 2),
        size_sq_sum=int(np.sum(sizes**2)),
    )


def export_summary(vgg: VggSet) -> str:
    """Text summary: index, size, member indices, Frobenius weight per group."""
    report = frobenius_weights(vgg)
    lines = ["index,size,members,fro_norm_sq"]
    for i, members in enumerate(vgg.assignment):
        joined = " ".join(str(m) for m in members)
        lines.append(f"{i},{len(members)},{joined},{report.fro_norms_sq[i]:.17g}")
    return "\n".join(lines) + "\n"
