"""Classical enhancement baselines on integer images."""
from __future__ import annotations

import math
import warnings

import numpy as np

from .image_io import PixelImage, round_half_away

GAMMA_MIN, GAMMA_MAX = 0.2, 5.0


class DegenerateImage(UserWarning):
    """Auto gamma is undefined (image mean at 0 or at full scale)."""


def _finish(values, levels):
    return PixelImage(np.clip(round_half_away(values), 0, levels - 1).astype(np.int64), levels)


def equalization_map(img: PixelImage) -> np.ndarray:
    """Level lookup table ``round((L-1) * CDF(level))``."""
    hist = np.bincount(img.pixels.ravel(), minlength=img.levels)
    cdf = np.cumsum(hist) / img.pixels.size
    return np.clip(round_half_away((img.levels - 1) * cdf), 0, img.levels - 1).astype(np.int64)


def histogram_equalization(img: PixelImage) -> PixelImage:
    return PixelImage(equalization_map(img)[img.pixels], img.levels)


def auto_gamma(img: PixelImage) -> float:
    """Gamma that sends the mean normalized level to 0.5, clamped to [0.2, 5]."""
    mean = float(np.mean(img.pixels)) / (img.levels - 1)
    if mean <= 0.0 or mean >= 1.0:
        warnings.warn(f"auto gamma undefined for mean level {mean}; using 1", DegenerateImage)
        return 1.0
    gamma = math.log(0.5) / math.log(mean)
    return min(max(gamma, GAMMA_MIN), GAMMA_MAX)


def gamma_correction(img: PixelImage, gamma="auto") -> PixelImage:
    if gamma == "auto":
        gamma = auto_gamma(img)
    gamma = float(gamma)
    if not gamma > 0.0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    scale = img.levels - 1
    return _finish(scale * (img.pixels / scale) ** gamma, img.levels)
