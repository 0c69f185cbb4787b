"""Moment statistics and the two-point surrogate behind the mean dynamic range.

An image is replaced by a two-valued distribution (mass ``q_low`` at
``v_low``, ``q_high`` at ``v_high``) that keeps its mean, variance and
skewness.  The mean dynamic range is ``v_high - v_low``.

The logarithmic framework is the classical one conjugated by ``phi``: its
mean, spread and skewness are the ordinary statistics of ``phi(pixels)``
mapped back, and its two-point solution is the classical solution on
``phi(pixels)`` mapped back.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gray_algebra import GrayImage, phi, phi_inv

CLASSICAL = "classical"
LOGARITHMIC = "logarithmic"
FRAMEWORKS = (CLASSICAL, LOGARITHMIC)


class EmptyImage(ValueError):
    pass


class DegenerateSpread(ValueError):
    """The values have zero spread, so no two-point surrogate exists."""


@dataclass(frozen=True)
class Stats:
    """Mean, spread and skewness of a value multiset.

    For ``framework == "logarithmic"`` the ``skew`` field holds the ordinary
    skewness of ``phi(values)`` and ``mean``/``spread`` are gray levels whose
    ``phi`` is the ordinary mean/standard deviation of ``phi(values)``.
    """

    mean: float
    spread: float
    skew: float
    framework: str
    count: int
    degenerate: bool = False


@dataclass(frozen=True)
class TwoPointSummary:
    q_low: float
    q_high: float
    v_low: float
    v_high: float
    framework: str


def _values(f) -> np.ndarray:
    if isinstance(f, GrayImage):
        x = f.values()
    else:
        x = np.asarray(f, dtype=np.float64).ravel()
    if x.size == 0:
        raise EmptyImage("no pixels to summarize")
    return x


def _moments(x: np.ndarray):
    """Mean, standard deviation and skewness, or ``(mean, 0, 0)`` if constant.

    Central moments are taken in two passes (numpy's pairwise sum is a fixed
    tree for a given length, so the result is reproducible).
    """
    if x.min() == x.max():
        return float(x[0]), 0.0, 0.0, True
    m = float(np.mean(x))
    d = x - m
    # scale first so tiny spreads don't underflow in d**2, d**3
    scale = float(np.max(np.abs(d)))
    if scale == 0.0:
        return m, 0.0, 0.0, True
    z = d / scale
    m2 = float(np.mean(z * z))
    sigma = scale * math.sqrt(m2)
    if sigma == 0.0:
        return m, 0.0, 0.0, True
    skew = float(np.mean(z * z * z)) / m2**1.5
    return m, sigma, skew, False


def classical_dynamic_range(f) -> float:
    x = _values(f)
    return float(x.max() - x.min())


def classical_stats(f) -> Stats:
    x = _values(f)
    m, sigma, s, degenerate = _moments(x)
    return Stats(m, sigma, s, CLASSICAL, x.size, degenerate)


def log_stats(f) -> Stats:
    x = _values(f)
    m, sigma, s, degenerate = _moments(np.asarray(phi(x)))
    return Stats(phi_inv(m), phi_inv(sigma), s, LOGARITHMIC, x.size, degenerate)


def compute_stats(f, framework: str = LOGARITHMIC) -> Stats:
    if framework == CLASSICAL:
        return classical_stats(f)
    if framework == LOGARITHMIC:
        return log_stats(f)
    raise ValueError(f"unknown framework {framework!r}")


def _two_point(m: float, sigma: float, s: float):
    root = math.sqrt(s * s + 4.0)
    q_low = 0.5 * (1.0 + s / root)
    q_high = 0.5 * (1.0 - s / root)
    v_low = m - sigma * math.sqrt(q_high / q_low)
    v_high = m + sigma * math.sqrt(q_low / q_high)
    return q_low, q_high, v_low, v_high


def _require(stats: Stats, framework: str):
    if stats.framework != framework:
        raise ValueError(f"expected {framework} statistics, got {stats.framework}")
    if stats.degenerate or stats.spread <= 0.0:
        raise DegenerateSpread("spread is zero; the mean dynamic range is 0")


def solve_two_point_classical(stats: Stats) -> TwoPointSummary:
    _require(stats, CLASSICAL)
    return TwoPointSummary(*_two_point(stats.mean, stats.spread, stats.skew), CLASSICAL)


def solve_two_point_log(stats: Stats) -> TwoPointSummary:
    _require(stats, LOGARITHMIC)
    q_low, q_high, x_low, x_high = _two_point(phi(stats.mean), phi(stats.spread), stats.skew)
    return TwoPointSummary(q_low, q_high, phi_inv(x_low), phi_inv(x_high), LOGARITHMIC)


def solve_two_point(stats: Stats) -> TwoPointSummary:
    if stats.framework == CLASSICAL:
        return solve_two_point_classical(stats)
    return solve_two_point_log(stats)


def mean_dynamic_range(tp: TwoPointSummary) -> float:
    # ordinary difference in both frameworks
    return tp.v_high - tp.v_low


def image_mean_dynamic_range(f, framework: str = LOGARITHMIC) -> float:
    """Mean dynamic range of an image; 0 when all values coincide."""
    stats = compute_stats(f, framework)
    if stats.degenerate:
        return 0.0
    return mean_dynamic_range(solve_two_point(stats))


def classical_center(stats: Stats) -> float:
    if stats.framework != CLASSICAL:
        raise ValueError("classical_center needs classical statistics")
    return stats.mean + 0.5 * stats.skew * stats.spread


def log_center(stats: Stats) -> float:
    """``m <+> (skew/2) <x> sigma``, evaluated in phi-space."""
    if stats.framework != LOGARITHMIC:
        raise ValueError("log_center needs logarithmic statistics")
    return phi_inv(phi(stats.mean) + 0.5 * stats.skew * phi(stats.spread))
