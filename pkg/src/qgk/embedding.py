"""Parameter vectors to quantum states through grouped-generator unitaries.

Product mode applies exp(-i phi_i H_i) group by group (ascending group index
acts first); sum mode exponentiates the single summed Hamiltonian. Product is
the default because each factor carries one parameter, which admits the exact
tangent states used by the alignment trainer. Sum mode is kept for the
commuting consistency checks and differentiates by finite differences only.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .grouping import VggSet
from .linalg import expi_apply, hermitian_eig


class EmbeddingMode(Enum):
    PRODUCT = "product"
    SUM = "sum"


class InitialState(Enum):
    UNIFORM = "uniform"   # equal superposition of all basis states
    GROUND = "ground"     # first basis state


@dataclass(frozen=True)
class EmbeddingConfig:
    mode: EmbeddingMode = EmbeddingMode.PRODUCT
    initial_state: InitialState = InitialState.UNIFORM


@dataclass(frozen=True)
class EmbeddedState:
    """A prepared state together with the parameters it came from."""

    psi: np.ndarray
    phi: np.ndarray
    config: EmbeddingConfig
    eta: int


def initial_state_vector(eta: int, which: InitialState) -> np.ndarray:
    dim = 2**eta
    if which is InitialState.UNIFORM:
        return np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128)
    psi = np.zeros(dim, dtype=np.complex128)
    psi[0] = 1.0
    return psi


def _check_phi(vgg: VggSet, phi: np.ndarray) -> np.ndarray:
    phi = np.asarray(phi, dtype=np.float64)
    if phi.shape != (vgg.groups,):
        raise ValueError(f"parameter vector has shape {phi.shape}, expected ({vgg.groups},)")
    if not np.all(np.isfinite(phi)):
        raise ValueError("parameter vector contains non-finite entries")
    return phi


def _apply_product_batch(vgg: VggSet, big_phi: np.ndarray, states: np.ndarray) -> np.ndarray:
    """Apply the product unitary row-wise; big_phi is (n, g), states (n, dim)."""
    for i, eig in enumerate(vgg.eigs):
        if not np.any(big_phi[:, i]):
            continue  # zero angle: factor is exactly the identity
        vectors = eig.eigenvectors
        phases = np.exp(-1j * np.outer(big_phi[:, i], eig.eigenvalues))
        states = ((states @ vectors.conj()) * phases) @ vectors.T
    return states


def embed_batch(vgg: VggSet, big_phi: np.ndarray, config: EmbeddingConfig) -> np.ndarray:
    """Embed each row of an (n, g) parameter matrix; returns (n, 2^eta) states."""
    big_phi = np.asarray(big_phi, dtype=np.float64)
    if big_phi.ndim != 2 or big_phi.shape[1] != vgg.groups:
        raise ValueError(f"parameter matrix has shape {big_phi.shape}, expected (n, {vgg.groups})")
    if not np.all(np.isfinite(big_phi)):
        raise ValueError("parameter matrix contains non-finite entries")
    start = initial_state_vector(vgg.eta, config.initial_state)
    if config.mode is EmbeddingMode.PRODUCT:
        states = np.tile(start, (big_phi.shape[0], 1))
        return _apply_product_batch(vgg, big_phi, states)
    states = np.empty((big_phi.shape[0], vgg.dim), dtype=np.complex128)
    stack = np.stack(vgg.operators)
    for row in range(big_phi.shape[0]):
        if not np.any(big_phi[row]):
            states[row] = start
            continue
        summed = np.tensordot(big_phi[row], stack, axes=1)
        states[row] = expi_apply(hermitian_eig(summed), 1.0, start)
    return states


def embed(vgg: VggSet, phi: np.ndarray, config: EmbeddingConfig = EmbeddingConfig()) -> EmbeddedState:
    """Prepare the state for one parameter vector of length g."""
    phi = _check_phi(vgg, phi)
    psi = embed_batch(vgg, phi[None, :], config)[0]
    return EmbeddedState(psi=psi, phi=phi.copy(), config=config, eta=vgg.eta)


def embed_with_gradient_batch(
    vgg: VggSet, big_phi: np.ndarray, config: EmbeddingConfig
) -> tuple[np.ndarray, np.ndarray]:
    """States plus tangent states d psi / d phi_i for every row.

    Forward sweep: after each group unitary is applied to the running states,
    the partial tangents collected so far receive the same unitary (one batched
    product per group) and the new tangent -i H_i psi_i joins the stack.
    Returns (states (n, dim), tangents (n, g, dim)).
    """
    if config.mode is not EmbeddingMode.PRODUCT:
        raise ValueError("exact tangents require product mode; use finite differences for sum mode")
    big_phi = np.asarray(big_phi, dtype=np.float64)
    n, g = big_phi.shape
    if g != vgg.groups:
        raise ValueError(f"parameter matrix has shape {big_phi.shape}, expected (n, {vgg.groups})")
    if not np.all(np.isfinite(big_phi)):
        raise ValueError("parameter matrix contains non-finite entries")
    dim = vgg.dim
    states = np.tile(initial_state_vector(vgg.eta, config.initial_state), (n, 1))
    tangents = np.zeros((n, g, dim), dtype=np.complex128)
    for i, eig in enumerate(vgg.eigs):
        vectors = eig.eigenvectors
        phases = np.exp(-1j * np.outer(big_phi[:, i], eig.eigenvalues))
        if i > 0:
            block = tangents[:, :i, :]
            block = ((block @ vectors.conj()) * phases[:, None, :]) @ vectors.T
            tangents[:, :i, :] = block
        states = ((states @ vectors.conj()) * phases) @ vectors.T
        tangents[:, i, :] = -1j * (states @ vgg.operators[i].T)
    return states, tangents


def embed_with_gradient(
    vgg: VggSet, phi: np.ndarray, config: EmbeddingConfig = EmbeddingConfig()
) -> tuple[EmbeddedState, np.ndarray]:
    """State and per-parameter tangents for a single parameter vector."""
    phi = _check_phi(vgg, phi)
    states, tangents = embed_with_gradient_batch(vgg, phi[None, :], config)
    return EmbeddedState(psi=states[0], phi=phi.copy(), config=config, eta=vgg.eta), tangents[0]


def unitarity_check(vgg: VggSet, phi: np.ndarray, config: EmbeddingConfig = EmbeddingConfig()) -> float:
    """Max deviation of U^dag U from the identity.

    The full unitary is materialised by applying the embedding map to every
    standard basis vector and checking column orthonormality.
    """
    phi = _check_phi(vgg, phi)
    u = np.eye(vgg.dim, dtype=np.complex128)
    if config.mode is EmbeddingMode.PRODUCT:
        for i, eig in enumerate(vgg.eigs):
            u = expi_apply(eig, phi[i], u)
    else:
        summed = np.tensordot(phi, np.stack(vgg.operators), axes=1)
        u = expi_apply(hermitian_eig(summed), 1.0, u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(vgg.dim))))


def norm_deviation(state: np.ndarray) -> float:
    """Distance of the state's 2-norm from 1."""
    return abs(float(np.linalg.norm(state)) - 1.0)
