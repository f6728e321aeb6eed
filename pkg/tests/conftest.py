import numpy as np
import pytest

from clms import derive_model, random_scenario

DEFAULT_SEED = 42
DEFAULT_L = 7
DEFAULT_K = 3


@pytest.fixture(scope="session")
def default_spec():
    return random_scenario(DEFAULT_SEED, DEFAULT_L, DEFAULT_K, eta=1e-2)


@pytest.fixture(scope="session")
def default_model(default_spec):
    return derive_model(default_spec)


def make_spec(seed, L=7, K=3, eta=1e-2):
    return random_scenario(seed, L, K, eta=eta)


def make_model(seed, L=7, K=3, eta=1e-2):
    return derive_model(make_spec(seed, L, K, eta))


def varied_sizes(seeds):
    """Deterministic (seed, L, K) triples covering a range of problem sizes."""
    out = []
    for seed in seeds:
        L = 4 + seed % 5
        K = 1 + seed % (L - 1)
        out.append((seed, L, K))
    return out


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(1234)
