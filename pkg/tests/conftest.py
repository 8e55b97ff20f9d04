import numpy as np
import pytest

from tradeclear import ImportMatrix, TauMatrix


def random_instance(rng, n=None, l=None):
    """Positive import matrix and positive row-stochastic allocation matrix."""
    n = int(rng.integers(2, 9)) if n is None else n
    l = int(rng.integers(2, 9)) if l is None else l
    C = rng.uniform(0.1, 10.0, size=(n, l))
    tau = rng.uniform(0.05, 1.0, size=(l, n))
    tau /= tau.sum(axis=1, keepdims=True)
    return ImportMatrix(C), TauMatrix(tau)


@pytest.fixture
def rng():
    return np.random.default_rng(20250819)
