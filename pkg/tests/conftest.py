import numpy as np
import pytest

from lipenhance.gray_algebra import GrayImage
from lipenhance.synthetic import random_gray_values


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_image(rng, max_side=64):
    h, w = rng.integers(1, max_side + 1, 2)
    return GrayImage(random_gray_values(rng, h * w).reshape(h, w))


def random_images(seed, count, max_side=64, min_distinct=1):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        f = random_image(rng, max_side)
        if np.unique(f.values()).size >= min_distinct:
            out.append(f)
    return out


def brute_moment(x, k):
    """Raw moment by explicit summation (no numpy reductions)."""
    total = 0.0
    for v in np.asarray(x, dtype=np.float64).ravel().tolist():
        total += v**k
    return total / np.asarray(x).size
