import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20260816))


def make_rng(seed: int = 20260816) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))
