"""Dense complex linear algebra on statevector dimensions up to 2^8.

Hermitian eigendecomposition, unitary application through the eigenbasis,
and single-qubit partial traces. All functions are pure; all tolerances live
in one place (``TOL``) so tests and production agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared across the package."""

    hermiticity: float = 1e-10        # max |H - H^dag| accepted as Hermitian input
    orthonormality: float = 1e-10     # max |V^dag V - I| for eigenvector bases
    reconstruction: float = 1e-9      # relative, |V L V^dag - H| vs |H|
    state_norm: float = 1e-10         # unit-norm slack for state vectors
    trace: float = 1e-10              # unit-trace slack for reduced density matrices
    generator_hermiticity: float = 1e-12
    generator_trace: float = 1e-12
    generator_norm: float = 1e-10     # Tr(h^2) = 2
    orthogonality: float = 1e-10      # Tr(h_i h_j) = 2 delta_ij
    group_hermiticity: float = 1e-12
    group_frobenius: float = 1e-9     # |H_i|_F^2 = 2 |G_i|
    unitarity: float = 1e-9
    phase_floor: float = 1e-12        # smallest component used for phase fixing


TOL = Tolerances()


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral factorisation H = V diag(eigenvalues) V^dag.

    Eigenvalues ascend; eigenvector columns are orthonormal with the first
    sizeable component of each column made real and positive, so the
    factorisation is deterministic for a fixed input.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    v = vectors.copy()
    for col in range(v.shape[1]):
        mags = np.abs(v[:, col])
        idx = int(np.argmax(mags > TOL.phase_floor))
        pivot = v[idx, col]
        if abs(pivot) > TOL.phase_floor:
            v[:, col] *= np.conj(pivot) / abs(pivot)
    return v


def hermitian_eig(h: np.ndarray) -> EigenDecomposition:
    """Eigendecompose a Hermitian matrix.

    Raises ValueError for non-square, non-finite, or non-Hermitian input
    (max deviation ``TOL.hermiticity``).
    """
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if not (np.all(np.isfinite(h.real)) and np.all(np.isfinite(h.imag))):
        raise ValueError("matrix contains non-finite entries")
    dev = np.max(np.abs(h - h.conj().T))
    if dev > TOL.hermiticity:
        raise ValueError(f"matrix is not Hermitian: max |H - H^dag| = {dev:.3e}")
    eigenvalues, eigenvectors = np.linalg.eigh(h)
    return EigenDecomposition(eigenvalues, _fix_phases(eigenvectors))


def expi_apply(decomp: EigenDecomposition, phi: float, v: np.ndarray) -> np.ndarray:
    """Apply exp(-i * phi * H) to a vector (or to the columns of a matrix).

    Computed as V diag(exp(-i phi lambda)) V^dag v; norm preserving.
    """
    v = np.asarray(v, dtype=np.complex128)
    if v.shape[0] != decomp.dim:
        raise ValueError(f"dimension mismatch: operator {decomp.dim}, vector {v.shape[0]}")
    if phi == 0.0:
        return v.copy()
    phases = np.exp(-1j * phi * decomp.eigenvalues)
    vecs = decomp.eigenvectors
    if v.ndim == 1:
        return vecs @ (phases * (vecs.conj().T @ v))
    return vecs @ (phases[:, None] * (vecs.conj().T @ v))


def partial_trace_single_qubit(psi: np.ndarray, keep: int, eta: int) -> np.ndarray:
    """Reduced 2x2 density matrix of qubit ``keep`` of an eta-qubit pure state.

    Qubit 0 is the leftmost tensor factor (most significant bit of the state
    index). The result is Hermitian with unit trace and non-negative spectrum.
    """
    psi = np.asarray(psi, dtype=np.complex128)
    dim = 2**eta
    if psi.shape != (dim,):
        raise ValueError(f"state has shape {psi.shape}, expected ({dim},)")
    if not 0 <= keep < eta:
        raise ValueError(f"qubit index {keep} out of range for eta={eta}")
    tensor = psi.reshape((2,) * eta)
    front = np.moveaxis(tensor, keep, 0).reshape(2, -1)
    return front @ front.conj().T
