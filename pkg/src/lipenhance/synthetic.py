"""Seeded synthetic test images."""
from __future__ import annotations

import numpy as np

from .image_io import PixelImage


def gaussian_blob(size=256, mean_level=60.0, contrast=90.0, noise=4.0, seed=0, levels=256):
    """Square image of a Gaussian blob on a flat background plus Gaussian noise.

    The blob profile is shifted so the average pixel lands near ``mean_level``.
    A negative ``contrast`` gives a dark blob on a bright background.
    """
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:size, 0:size] / max(size - 1, 1)
    cy, cx = rng.uniform(0.35, 0.65, 2)
    width = rng.uniform(0.15, 0.25)
    profile = np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2) / (2 * width**2))
    img = mean_level + contrast * (profile - profile.mean())
    img += rng.normal(0.0, noise, img.shape)
    return PixelImage(np.clip(np.rint(img), 0, levels - 1).astype(np.int64), levels)


def dark_image(size=256, seed=0):
    return gaussian_blob(size, mean_level=60.0, seed=seed)


def bright_image(size=256, seed=0):
    # dark blob on a bright background keeps every pixel below 255
    return gaussian_blob(size, mean_level=200.0, contrast=-90.0, seed=seed)


def random_gray_values(rng, n, kind=None):
    """Random gray levels in E from one of several shapes (uniform, normal, beta, clustered)."""
    kind = kind if kind is not None else rng.integers(4)
    if kind == 0:
        x = rng.uniform(-0.95, 0.95, n)
    elif kind == 1:
        x = np.tanh(rng.normal(rng.uniform(-1, 1), rng.uniform(0.05, 1.0), n))
    elif kind == 2:
        x = 2 * rng.beta(rng.uniform(0.3, 5), rng.uniform(0.3, 5), n) - 1
    else:
        centers = rng.uniform(-0.9, 0.9, rng.integers(2, 5))
        x = rng.choice(centers, n) + rng.normal(0, 0.02, n)
    return np.clip(x, -0.99, 0.99)
