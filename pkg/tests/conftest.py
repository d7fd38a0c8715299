import numpy as np
import pytest

from adsgeo import embedding


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def bump():
    return embedding.bump_immersion()


@pytest.fixture(scope="session")
def family_07():
    return embedding.family_immersion(-0.7)


def random_unimodular(rng, scale=0.8):
    """Random 2x2 with determinant exactly normalized to 1."""
    while True:
        m = np.eye(2) + scale * rng.standard_normal((2, 2))
        det = np.linalg.det(m)
        if det > 0.05:
            return m / np.sqrt(det)
