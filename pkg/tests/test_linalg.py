import numpy as np
import pytest
import scipy.linalg

from qgk.linalg import TOL, expi_apply, hermitian_eig, partial_trace_single_qubit

from conftest import random_hermitian, random_state

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def test_eig_diagonal_input():
    decomp = hermitian_eig(np.diag([1.0, -1.0]).astype(complex))
    assert np.allclose(decomp.eigenvalues, [-1.0, 1.0])
    # eigenvectors are the basis vectors, permuted to ascending order
    assert np.allclose(np.abs(decomp.eigenvectors), [[0, 1], [1, 0]])


def test_eig_pauli_x():
    decomp = hermitian_eig(SX)
    assert np.allclose(decomp.eigenvalues, [-1.0, 1.0])
    minus = np.array([1, -1]) / np.sqrt(2)
    plus = np.array([1, 1]) / np.sqrt(2)
    # phase convention: first sizeable component real-positive
    assert np.allclose(decomp.eigenvectors[:, 0], minus, atol=1e-12)
    assert np.allclose(decomp.eigenvectors[:, 1], plus, atol=1e-12)


def test_eig_reconstruction_random():
    gen = np.random.default_rng(11)
    h = random_hermitian(gen, 8)
    decomp = hermitian_eig(h)
    rebuilt = decomp.eigenvectors @ np.diag(decomp.eigenvalues) @ decomp.eigenvectors.conj().T
    scale = np.max(np.abs(h))
    assert np.max(np.abs(rebuilt - h)) < TOL.reconstruction * scale
    ortho = decomp.eigenvectors.conj().T @ decomp.eigenvectors
    assert np.max(np.abs(ortho - np.eye(8))) < TOL.orthonormality
    assert np.all(np.diff(decomp.eigenvalues) >= -1e-14)


def test_eig_deterministic():
    gen = np.random.default_rng(7)
    h = random_hermitian(gen, 6)
    first = hermitian_eig(h)
    second = hermitian_eig(h.copy())
    assert np.array_equal(first.eigenvalues, second.eigenvalues)
    assert np.array_equal(first.eigenvectors, second.eigenvectors)


def test_eig_rejects_non_square_and_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eig(np.ones((2, 3)))
    with pytest.raises(ValueError):
        hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))


def test_expi_identity_at_zero_angle():
    gen = np.random.default_rng(3)
    v = random_state(gen, 4)
    decomp = hermitian_eig(random_hermitian(gen, 4))
    assert np.allclose(expi_apply(decomp, 0.0, v), v, atol=1e-14)


def test_expi_eigenstate_global_phase():
    decomp = hermitian_eig(SZ)
    ket0 = np.array([1, 0], dtype=complex)
    out = expi_apply(decomp, np.pi / 2, ket0)
    assert np.allclose(out, np.exp(-1j * np.pi / 2) * ket0)
    assert abs(np.linalg.norm(out) - 1.0) < TOL.state_norm


def test_expi_pauli_x_quarter_turn():
    decomp = hermitian_eig(SX)
    out = expi_apply(decomp, np.pi / 2, np.array([1, 0], dtype=complex))
    assert np.allclose(out, [0, -1j], atol=1e-12)


def test_expi_matches_scipy_expm():
    gen = np.random.default_rng(19)
    h = random_hermitian(gen, 8)
    v = random_state(gen, 8)
    phi = 0.7321
    expected = scipy.linalg.expm(-1j * phi * h) @ v
    assert np.allclose(expi_apply(hermitian_eig(h), phi, v), expected, atol=1e-10)


def test_expi_norm_preservation_and_additivity():
    gen = np.random.default_rng(23)
    for dim in (2, 4, 8):
        decomp = hermitian_eig(random_hermitian(gen, dim))
        v = random_state(gen, dim)
        for phi in gen.uniform(-np.pi, np.pi, 5):
            out = expi_apply(decomp, phi, v)
            assert abs(np.linalg.norm(out) - 1.0) < TOL.state_norm
        a, b = gen.uniform(-np.pi, np.pi, 2)
        chained = expi_apply(decomp, a, expi_apply(decomp, b, v))
        direct = expi_apply(decomp, a + b, v)
        assert np.max(np.abs(chained - direct)) < 1e-9


def test_expi_dimension_mismatch():
    decomp = hermitian_eig(SX)
    with pytest.raises(ValueError):
        expi_apply(decomp, 1.0, np.zeros(3, dtype=complex))


def test_partial_trace_product_state():
    ket00 = np.zeros(4, dtype=complex)
    ket00[0] = 1.0
    rho = partial_trace_single_qubit(ket00, keep=0, eta=2)
    assert np.allclose(rho, [[1, 0], [0, 0]])


def test_partial_trace_bell_state():
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    for k in (0, 1):
        rho = partial_trace_single_qubit(bell, keep=k, eta=2)
        assert np.allclose(rho, np.eye(2) / 2, atol=1e-12)


def test_partial_trace_matches_full_density_matrix():
    gen = np.random.default_rng(31)
    psi = random_state(gen, 8)
    rho_full = np.outer(psi, psi.conj()).reshape(2, 2, 2, 2, 2, 2)
    for keep in range(3):
        got = partial_trace_single_qubit(psi, keep=keep, eta=3)
        # index summation oracle over the two traced-out qubits
        axes = [0, 1, 2]
        axes.remove(keep)
        expected = rho_full
        expected = np.trace(expected, axis1=axes[1], axis2=axes[1] + 3)
        expected = np.trace(expected, axis1=axes[0], axis2=axes[0] + 2)
        assert np.allclose(got, expected, atol=1e-12)
        assert abs(np.trace(got).real - 1.0) < TOL.trace
        assert np.min(np.linalg.eigvalsh(got)) > -1e-12


def test_partial_trace_index_out_of_range():
    psi = np.zeros(4, dtype=complex)
    psi[0] = 1.0
    with pytest.raises(ValueError):
        partial_trace_single_qubit(psi, keep=2, eta=2)
