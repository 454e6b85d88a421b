import numpy as np
import pytest

from qgk.embedding import EmbeddingConfig, embed
from qgk.kernels import (
    KernelMatrix,
    classical_kernel,
    cross_gram,
    gram,
    kta,
    load_kernel,
    save_kernel,
    spectral_concentration,
    target_kernel,
)

from conftest import random_state


def test_gram_identical_states():
    psi = np.array([1, 0], dtype=complex)
    k = gram(np.stack([psi, psi]))
    assert np.allclose(k.values, np.ones((2, 2)), atol=1e-14)


def test_gram_orthogonal_states():
    plus = np.ones(2) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    k = gram(np.stack([plus, minus]).astype(complex))
    assert k.values[0, 1] == pytest.approx(0.0, abs=1e-14)
    assert k.values[0, 0] == pytest.approx(1.0, abs=1e-12)


def test_gram_matches_pairwise_loop():
    gen = np.random.default_rng(8)
    states = np.stack([random_state(gen, 4) for _ in range(5)])
    k = gram(states).values
    for i in range(5):
        for j in range(5):
            expected = abs(np.vdot(states[j], states[i])) ** 2
            assert abs(k[i, j] - expected) < 1e-12


def test_gram_properties_random_batches():
    gen = np.random.default_rng(13)
    for _ in range(10):
        n = int(gen.integers(3, 12))
        dim = 2 ** int(gen.integers(1, 4))
        states = np.stack([random_state(gen, dim) for _ in range(n)])
        k = gram(states).values
        assert np.max(np.abs(k - k.T)) < 1e-10
        assert np.max(np.abs(np.diag(k) - 1.0)) < 1e-10
        assert k.min() > -1e-10 and k.max() < 1.0 + 1e-10
        assert np.linalg.eigvalsh(k).min() >= -1e-8 * n


def test_gram_provenance_from_states(vgg_sets):
    vgg = vgg_sets(1)
    states = [embed(vgg, np.zeros(3), EmbeddingConfig()) for _ in range(2)]
    k = gram(states)
    assert k.provenance["family"] == "qgk"
    assert k.provenance["eta"] == "1"


def test_gram_empty_batch():
    with pytest.raises(ValueError):
        gram(np.zeros((0, 2), dtype=complex))


def test_cross_gram_block():
    gen = np.random.default_rng(3)
    a = np.stack([random_state(gen, 4) for _ in range(3)])
    b = np.stack([random_state(gen, 4) for _ in range(5)])
    block = cross_gram(a, b)
    assert block.shape == (3, 5)
    assert abs(block[1, 2] - abs(np.vdot(b[2], a[1])) ** 2) < 1e-14


def test_kta_perfect_alignment():
    y = target_kernel(np.array([0, 0, 1, 1]))
    score = kta(y, y)
    assert score.alignment == pytest.approx(1.0, abs=1e-14)
    assert score.loss == pytest.approx(0.0, abs=1e-14)


def test_kta_identity_versus_balanced_signs():
    labels = np.array([1, 1, -1, -1])
    y = target_kernel(labels, scheme="binary")
    score = kta(np.eye(4), y)
    assert score.alignment == pytest.approx(0.5)


def test_kta_scale_invariance():
    gen = np.random.default_rng(77)
    a = gen.normal(size=(6, 6))
    k = a @ a.T
    y = target_kernel(np.array([0, 1, 0, 1, 0, 1]))
    base = kta(k, y).alignment
    assert kta(17.3 * k, y).alignment == pytest.approx(base, abs=1e-12)


def test_kta_degenerate_inputs():
    with pytest.raises(ValueError):
        kta(np.zeros((3, 3)), np.eye(3))


def test_target_kernel_binary():
    y = target_kernel(np.array([1, 1, -1]), scheme="binary")
    assert np.array_equal(y.values, [[1, 1, -1], [1, 1, -1], [-1, -1, 1]])


def test_target_kernel_multiclass():
    y = target_kernel(np.array([0, 1, 2]), scheme="multiclass")
    assert np.allclose(np.diag(y.values), 1.0)
    off = y.values[~np.eye(3, dtype=bool)]
    assert np.allclose(off, -0.5)


def test_target_kernel_indicator():
    y = target_kernel(np.array([0, 1, 0]), scheme="indicator")
    assert np.array_equal(y.values, [[1, 0, 1], [0, 1, 0], [1, 0, 1]])


def test_target_kernel_symmetric_unit_diagonal():
    gen = np.random.default_rng(5)
    labels = gen.integers(0, 4, size=12)
    for scheme in ("multiclass", "indicator"):
        y = target_kernel(labels, scheme=scheme).values
        assert np.array_equal(y, y.T)
        assert np.allclose(np.diag(y), 1.0)


def test_target_kernel_single_class_rejected():
    with pytest.raises(ValueError):
        target_kernel(np.array([1, 1, 1]))


def test_classical_rbf():
    x = np.array([[0.0], [1.0]])
    k = classical_kernel(x, "rbf", gamma=1.0)
    assert k.values[0, 0] == pytest.approx(1.0)
    assert k.values[0, 1] == pytest.approx(np.exp(-1.0))


def test_classical_linear_orthogonal():
    x = np.eye(3)
    k = classical_kernel(x, "linear")
    assert np.allclose(k.values, np.eye(3))


def test_classical_rbf_default_bandwidth():
    gen = np.random.default_rng(2)
    x = gen.normal(size=(10, 4))
    k = classical_kernel(x, "rbf")
    expected_gamma = 1.0 / (4 * x.var())
    assert float(k.provenance["gamma"]) == pytest.approx(expected_gamma)


def test_classical_cross_block():
    gen = np.random.default_rng(4)
    x = gen.normal(size=(6, 3))
    x2 = gen.normal(size=(4, 3))
    block = classical_kernel(x, "rbf", gamma=0.5, x2=x2).values
    assert block.shape == (6, 4)
    expected = np.exp(-0.5 * np.sum((x[2] - x2[1]) ** 2))
    assert block[2, 1] == pytest.approx(expected)


def test_spectral_concentration_identity_is_uniform():
    assert spectral_concentration(np.eye(8)) == pytest.approx(0.0, abs=1e-12)


def test_spectral_concentration_rank_one_is_log_n():
    n = 6
    assert spectral_concentration(np.ones((n, n))) == pytest.approx(np.log(n), abs=1e-12)


def test_spectral_concentration_matches_kl_oracle():
    gen = np.random.default_rng(9)
    a = gen.normal(size=(8, 8))
    k = a @ a.T
    lam = np.linalg.eigvalsh(k)
    lam = np.clip(lam, 0.0, None)
    lam = lam / lam.sum()
    expected = sum(v * np.log(8 * v) for v in lam if v > 0)
    assert spectral_concentration(k) == pytest.approx(expected, abs=1e-10)


def test_spectral_concentration_range():
    gen = np.random.default_rng(10)
    for n in (4, 9):
        a = gen.normal(size=(n, n))
        value = spectral_concentration(a @ a.T)
        assert 0.0 <= value <= np.log(n) + 1e-12


def test_spectral_concentration_zero_matrix():
    with pytest.raises(ValueError):
        spectral_concentration(np.zeros((3, 3)))


def test_spectral_concentration_invariant_to_reordering():
    gen = np.random.default_rng(21)
    states = np.stack([random_state(gen, 4) for _ in range(10)])
    base = spectral_concentration(gram(states))
    perm = gen.permutation(10)
    shuffled = spectral_concentration(gram(states[perm]))
    assert shuffled == pytest.approx(base, abs=1e-10)


def test_kernel_roundtrip(tmp_path):
    gen = np.random.default_rng(15)
    values = gen.random((4, 4))
    values = (values + values.T) / 2
    k = KernelMatrix(values, {"family": "rbf", "gamma": "0.5"})
    path = tmp_path / "kernel.csv"
    save_kernel(k, path)
    loaded = load_kernel(path)
    assert np.array_equal(loaded.values, values)
    assert loaded.provenance == {"family": "rbf", "gamma": "0.5"}
