import numpy as np
import pytest


def random_hollow(rng, n, scale=1.0):
    """Random hollow symmetric matrix with entries in [-scale, scale]."""
    m = rng.uniform(-scale, scale, size=(n, n))
    upper = np.triu(m, 1)
    return upper + upper.T


def random_edm(rng, n, d):
    """Squared Euclidean distances of a random point cloud, exactly hollow."""
    pts = rng.normal(size=(n, d))
    sq = np.einsum("ij,ij->i", pts, pts)
    m = sq[:, None] + sq[None, :] - 2.0 * pts @ pts.T
    np.fill_diagonal(m, 0.0)
    upper = np.triu(m, 1)
    return upper + upper.T


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
