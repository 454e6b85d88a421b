import numpy as np
import pytest

from qgk.generators import build_generator_set
from qgk.grouping import GroupingConfig, build_vgg_set


@pytest.fixture(scope="session")
def generator_sets():
    cache = {}

    def get(eta):
        if eta not in cache:
            cache[eta] = build_generator_set(eta)
        return cache[eta]

    return get


@pytest.fixture(scope="session")
def vgg_sets(generator_sets):
    cache = {}

    def get(eta, scaling="exponential", width=None, explicit=None):
        key = (eta, scaling, width, explicit)
        if key not in cache:
            from qgk.grouping import GroupScaling

            config = GroupingConfig(
                eta=eta,
                scaling=GroupScaling(scaling),
                width=width,
                explicit_groups=explicit,
            )
            cache[key] = build_vgg_set(generator_sets(eta), config)
        return cache[key]

    return get


def random_state(gen: np.random.Generator, dim: int) -> np.ndarray:
    psi = gen.normal(size=dim) + 1j * gen.normal(size=dim)
    return psi / np.linalg.norm(psi)


def random_hermitian(gen: np.random.Generator, dim: int) -> np.ndarray:
    a = gen.normal(size=(dim, dim)) + 1j * gen.normal(size=(dim, dim))
    return (a + a.conj().T) / 2.0
