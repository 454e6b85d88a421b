import numpy as np

from qgk import rng


def test_same_seed_same_label_reproduces():
    a = rng.stream(7, "noise").random(16)
    b = rng.stream(7, "noise").random(16)
    assert np.array_equal(a, b)


def test_labels_split_streams():
    a = rng.stream(7, "noise").random(16)
    b = rng.stream(7, "init").random(16)
    assert not np.array_equal(a, b)
    c = rng.stream(8, "noise").random(16)
    assert not np.array_equal(a, c)


def test_box_muller_moments():
    draws = rng.normal(rng.stream(0, "gauss"), 200_000)
    assert abs(draws.mean()) < 0.01
    assert abs(draws.std() - 1.0) < 0.01
    # tail sanity: ~0.27% outside 3 sigma
    assert 0.001 < np.mean(np.abs(draws) > 3.0) < 0.006


def test_normal_shapes():
    gen = rng.stream(1, "shapes")
    assert rng.normal(gen, 5).shape == (5,)
    assert rng.normal(rng.stream(1, "shapes"), (3, 4)).shape == (3, 4)
    odd = rng.normal(rng.stream(2, "odd"), 7)
    assert odd.shape == (7,) and np.all(np.isfinite(odd))


def test_normal_deterministic():
    a = rng.normal(rng.stream(3, "x"), (4, 4))
    b = rng.normal(rng.stream(3, "x"), (4, 4))
    assert np.array_equal(a, b)
