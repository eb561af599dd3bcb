import numpy as np
import pytest


def random_sym_dense(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Random dense array that is super-symmetric bit for bit.

    Every position reads the value stored at its sorted index, so permuted
    positions are literally the same float.
    """
    raw = rng.standard_normal((n,) * m)
    grid = np.sort(np.indices((n,) * m), axis=0)
    return raw[tuple(grid)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
