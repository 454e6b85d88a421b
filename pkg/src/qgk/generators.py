"""Complete Hermitian generator basis of su(2^eta).

Three families span the traceless Hermitian matrices on the 2^eta-dimensional
Hilbert space: for every index pair r < c a real symmetric off-diagonal
generator E_rc + E_cr and an imaginary antisymmetric one -i(E_rc - E_cr), and
for k = 1..2^eta-1 a traceless diagonal generator
sqrt(2/(k(k+1))) (sum_{m<k} E_mm - k E_kk). The normalisation makes every
generator satisfy Tr(h^2) = 2 and any distinct pair Hilbert-Schmidt
orthogonal, giving 4^eta - 1 linearly independent elements in total.

Set ordering: symmetric and antisymmetric generators are emitted pairwise per
(r, c) in lexicographic order, followed by the diagonal family by ascending k.
At eta = 1 this yields exactly (sigma_x, sigma_y, sigma_z).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

import numpy as np

from .linalg import TOL

MAX_QUBITS = 8


class Family(Enum):
    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"
    DIAGONAL = "diagonal"


@dataclass(frozen=True)
class Generator:
    """One Hermitian, traceless basis matrix with its family tag."""

    matrix: np.ndarray
    family: Family
    family_index: int


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered generator basis of su(2^eta)."""

    eta: int
    items: tuple[Generator, ...]

    def __len__(self) -> int:
        return len(self.items)

    @property
    def dim(self) -> int:
        return 2**self.eta

    def family_indices(self, family: Family) -> list[int]:
        """Positions in ``items`` belonging to ``family``, in set order."""
        return [i for i, g in enumerate(self.items) if g.family is family]


def generator_count(eta: int) -> int:
    return 4**eta - 1


def _check_eta(eta: int) -> None:
    if not 1 <= eta <= MAX_QUBITS:
        raise ValueError(f"eta must be in 1..{MAX_QUBITS}, got {eta}")


def iter_generators(eta: int) -> Iterator[Generator]:
    """Yield the basis in canonical order without materialising it."""
    _check_eta(eta)
    dim = 2**eta
    pair_index = 0
    for r in range(dim - 1):
        for c in range(r + 1, dim):
            sym = np.zeros((dim, dim), dtype=np.complex128)
            sym[r, c] = 1.0
            sym[c, r] = 1.0
            yield Generator(sym, Family.SYMMETRIC, pair_index)
            anti = np.zeros((dim, dim), dtype=np.complex128)
            anti[r, c] = -1.0j
            anti[c, r] = 1.0j
            yield Generator(anti, Family.ANTISYMMETRIC, pair_index)
            pair_index += 1
    for k in range(1, dim):
        diag = np.zeros(dim)
        diag[:k] = 1.0
        diag[k] = -float(k)
        diag = diag * np.sqrt(2.0 / (k * (k + 1)))
        yield Generator(np.diag(diag.astype(np.complex128)), Family.DIAGONAL, k - 1)


def build_generator_set(eta: int) -> GeneratorSet:
    """Materialise the full basis; 4^eta - 1 generators of size 2^eta."""
    return GeneratorSet(eta, tuple(iter_generators(eta)))


@dataclass(frozen=True)
class BasisReport:
    """Deterministic verification report for a generator set."""

    count_expected: int
    count_actual: int
    hermiticity_max: float
    trace_max: float
    orthogonality_max: float

    @property
    def count_ok(self) -> bool:
        return self.count_expected == self.count_actual

    @property
    def hermiticity_ok(self) -> bool:
        return self.hermiticity_max < TOL.generator_hermiticity

    @property
    def trace_ok(self) -> bool:
        return self.trace_max < TOL.generator_trace

    @property
    def orthogonality_ok(self) -> bool:
        return self.orthogonality_max < TOL.orthogonality

    @property
    def all_ok(self) -> bool:
        return self.count_ok and self.hermiticity_ok and self.trace_ok and self.orthogonality_ok


def verify_basis(gs: GeneratorSet) -> BasisReport:
    """Check count, hermiticity, tracelessness and pairwise orthogonality.

    Failures are carried in the report rather than raised, with the maximal
    deviation per check.
    """
    mats = np.stack([g.matrix for g in gs.items])
    herm = float(np.max(np.abs(mats - np.conj(np.swapaxes(mats, 1, 2)))))
    trace = float(np.max(np.abs(np.trace(mats, axis1=1, axis2=2))))
    flat = mats.reshape(len(gs.items), -1)
    # Tr(h_i h_j) = <vec h_j, vec h_i> for Hermitian members
    overlaps = flat @ flat.conj().T
    ortho = float(np.max(np.abs(overlaps - 2.0 * np.eye(len(gs.items)))))
    return BasisReport(
        count_expected=generator_count(gs.eta),
        count_actual=len(gs.items),
        hermiticity_max=herm,
        trace_max=trace,
        orthogonality_max=ortho,
    )


_PAULI_ROWS = {
    # per-qubit bit pair (row, col) -> [(pauli char, entry value)]
    (0, 0): (("I", 1.0 + 0j), ("Z", 1.0 + 0j)),
    (1, 1): (("I", 1.0 + 0j), ("Z", -1.0 + 0j)),
    (0, 1): (("X", 1.0 + 0j), ("Y", -1.0j)),
    (1, 0): (("X", 1.0 + 0j), ("Y", 1.0j)),
}

PAULI_MATRICES = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def pauli_string_matrix(label: str) -> np.ndarray:
    """Tensor product for a label like "XYI"; qubit 0 is the leftmost factor."""
    out = PAULI_MATRICES[label[0]]
    for ch in label[1:]:
        out = np.kron(out, PAULI_MATRICES[ch])
    return out


def pauli_decompose(gen: Generator | np.ndarray, eta: int | None = None) -> list[tuple[str, float]]:
    """Expand a generator over Pauli strings with real coefficients.

    Returns label/coefficient pairs sorted by label; the weighted sum of
    ``pauli_string_matrix`` terms reconstructs the input. Coefficients are
    Tr(P h) / 2^eta, accumulated over the sparse entries of h so the cost is
    O(nnz * 2^eta) instead of O(16^eta).
    """
    matrix = gen.matrix if isinstance(gen, Generator) else np.asarray(gen, dtype=np.complex128)
    dim = matrix.shape[0]
    if eta is None:
        eta = int(round(np.log2(dim)))
    coeffs: dict[str, complex] = {}
    rows, cols = np.nonzero(matrix)
    for i, j in zip(rows.tolist(), cols.tolist()):
        value = matrix[i, j]
        bit_pairs = [((j >> (eta - 1 - q)) & 1, (i >> (eta - 1 - q)) & 1) for q in range(eta)]
        for choice in itertools.product(*(_PAULI_ROWS[bp] for bp in bit_pairs)):
            label = "".join(ch for ch, _ in choice)
            entry = np.prod([f for _, f in choice])
            coeffs[label] = coeffs.get(label, 0.0) + entry * value / dim
    out = []
    for label in sorted(coeffs):
        c = coeffs[label]
        if abs(c) < 1e-12:
            continue
        if abs(c.imag) > 1e-12:
            raise ValueError(f"non-real coefficient {c} for {label}")
        out.append((label, float(c.real)))
    return out


def export_pauli_decompositions(gs: GeneratorSet) -> str:
    """One line per generator: ``<index>,<family>,<label>:<coeff>[;...]``."""
    lines = []
    for idx, gen in enumerate(gs.items):
        terms = ";".join(f"{label}:{coeff:.17g}" for label, coeff in pauli_decompose(gen, gs.eta))
        lines.append(f"{idx},{gen.family.value},{terms}")
    return "\n".join(lines) + "\n"
