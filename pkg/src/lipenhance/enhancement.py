"""Optimal brightness translation and per-sign contrast homothety.

Translation: among all images ``f <+> w``, pick the ``w`` maximizing the
logarithmic mean dynamic range.  The optimum has a closed form, the
logarithmic negation of the two-point center.

Homothety: the positive and the negative pixels are each scaled by
``lam <x> .``, with ``lam`` maximizing that side's mean dynamic range.  The
optimum solves a scalar fixed-point equation in ``lam``; the iteration is
seeded with the value it takes at ``lam = 1``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .gray_algebra import GrayImage, log_add, log_neg, log_scalar_mul, phi, phi_inv
from .range_statistics import (
    LOGARITHMIC,
    Stats,
    TwoPointSummary,
    image_mean_dynamic_range,
    log_center,
    log_stats,
    solve_two_point_log,
)

log = logging.getLogger(__name__)


class NoConvergence(RuntimeError):
    def __init__(self, message, last_lambda, iterations, residual):
        super().__init__(message)
        self.last_lambda = last_lambda
        self.iterations = iterations
        self.residual = residual


class DegenerateProblem(ValueError):
    pass


# -- translation --------------------------------------------------------------

def optimal_translation_offset(stats: Stats) -> float:
    """Gray level ``w0`` such that ``f <+> w0`` has the largest mean dynamic range."""
    if stats.framework != LOGARITHMIC:
        raise ValueError("the optimal translation needs logarithmic statistics")
    if stats.degenerate:
        return log_neg(stats.mean)
    return log_neg(log_center(stats))


def translation_offset_from_bounds(v_low: float, v_high: float) -> float:
    """Same optimum written through the two-point bounds: ``-(1/2 <x> (v_low <+> v_high))``."""
    return phi_inv(-0.5 * (phi(v_low) + phi(v_high)))


def h_translation(w, v_low, v_high):
    """Mean dynamic range of the bounds after translating by ``w``."""
    return (v_high + w) / (1.0 + w * v_high) - (v_low + w) / (1.0 + w * v_low)


def h_translation_prime(w, v_low, v_high):
    return ((1.0 - v_high**2) / (1.0 + w * v_high) ** 2
            - (1.0 - v_low**2) / (1.0 + w * v_low) ** 2)


def translate(f: GrayImage, w: float) -> GrayImage:
    return GrayImage(log_add(f.pixels, w))


# -- sign split ---------------------------------------------------------------

@dataclass(frozen=True)
class SignSplit:
    positives: np.ndarray
    negatives: np.ndarray
    zero_count: int

    @property
    def total(self) -> int:
        return self.positives.size + self.negatives.size + self.zero_count


def split_signs(f) -> SignSplit:
    x = f.values() if isinstance(f, GrayImage) else np.asarray(f, dtype=np.float64).ravel()
    pos = x[x > 0]
    neg = x[x < 0]
    return SignSplit(pos, neg, int(x.size - pos.size - neg.size))


# -- homothety ----------------------------------------------------------------

@dataclass(frozen=True)
class HomothetyProblem:
    """Scaling problem for one side, in the variables ``u = (1-v)/(1+v)``.

    Always posed on positive bounds, so ``1 > u_low > u_high > 0``.  The
    negative side is reflected onto positive values first (``lam <x> (-v) =
    -(lam <x> v)``, so the objective is unchanged).
    """

    u_low: float
    u_high: float

    def __post_init__(self):
        if not (1.0 > self.u_low >= self.u_high > 0.0):
            raise ValueError(
                f"need 1 > u_low >= u_high > 0, got u_low={self.u_low}, u_high={self.u_high}")

    @classmethod
    def from_bounds(cls, v_low: float, v_high: float) -> "HomothetyProblem":
        """From positive two-point bounds ``0 < v_low < v_high < 1``."""
        # (1-v)/(1+v) = exp(-2 phi(v)); this form keeps precision near v = 1
        return cls(math.exp(-2.0 * phi(v_low)), math.exp(-2.0 * phi(v_high)))

    @classmethod
    def from_negative_bounds(cls, v_low: float, v_high: float) -> "HomothetyProblem":
        """From negative bounds ``-1 < v_low < v_high < 0``, by reflection."""
        return cls.from_bounds(-v_high, -v_low)

    @property
    def v_low(self) -> float:
        return (1.0 - self.u_low) / (1.0 + self.u_low)

    @property
    def v_high(self) -> float:
        return (1.0 - self.u_high) / (1.0 + self.u_high)


def _check_problem(problem: HomothetyProblem):
    if problem.u_low == problem.u_high:
        raise DegenerateProblem("u_low == u_high: the side has no spread")


def _recurrence(lam, problem: HomothetyProblem):
    a, b = problem.u_low, problem.u_high
    la, lb = math.log(a), math.log(b)
    ratio = (1.0 + b**lam) / (1.0 + a**lam)
    return (math.log(la / lb) + 2.0 * math.log(ratio)) / math.log(b / a)


def lambda_seed(problem: HomothetyProblem) -> float:
    _check_problem(problem)
    return _recurrence(1.0, problem)


def lambda_bracket(problem: HomothetyProblem):
    """Interval holding every iterate (and the fixed point), as ``(lo, hi)``.

    From ``1/2 < (1 + u_high**lam) / (1 + u_low**lam) < 1`` for ``lam > 0``.
    """
    _check_problem(problem)
    a, b = problem.u_low, problem.u_high
    base = math.log(math.log(a) / math.log(b))
    denom = math.log(b / a)
    ends = (base / denom, (base + 2.0 * math.log(0.5)) / denom)
    return min(ends), max(ends)


def lambda_iterates(problem: HomothetyProblem, n: int):
    """Seed followed by ``n`` fixed-point steps (``n + 1`` values)."""
    lams = [lambda_seed(problem)]
    for _ in range(n):
        lams.append(_recurrence(lams[-1], problem))
    return lams


def h_homothety(lam, problem: HomothetyProblem):
    """Mean dynamic range of the side after scaling by ``lam``."""
    a, b = problem.u_low, problem.u_high
    return 2.0 * (1.0 / (1.0 + b**lam) - 1.0 / (1.0 + a**lam))


def h_homothety_prime(lam, problem: HomothetyProblem):
    a, b = problem.u_low, problem.u_high
    ta, tb = a**lam, b**lam
    return -2.0 * (tb * math.log(b) / (1.0 + tb) ** 2 - ta * math.log(a) / (1.0 + ta) ** 2)


def homothety_lambda(problem: HomothetyProblem, tol: float = 1e-12, max_iter: int = 50):
    """Fixed point of the homothety recurrence.

    Stops once successive iterates differ by at most ``tol * max(1, lam)``.
    Returns ``(lam, iterations, residual)`` with ``residual = |h'(lam)|``.
    Raises ``NoConvergence`` (carrying the last iterate) otherwise.
    """
    lam = lambda_seed(problem)
    for k in range(1, max_iter + 1):
        nxt = _recurrence(lam, problem)
        step = abs(nxt - lam)
        lam = nxt
        if step <= tol * max(1.0, abs(lam)):
            return lam, k, abs(h_homothety_prime(lam, problem))
    residual = abs(h_homothety_prime(lam, problem))
    raise NoConvergence(
        f"homothety iteration did not settle in {max_iter} steps (|h'|={residual:.3g})",
        lam, max_iter, residual)


def apply_sign_homothety(f: GrayImage, lambda_pos=None, lambda_neg=None) -> GrayImage:
    x = f.pixels
    out = x.copy()
    if lambda_pos is not None:
        mask = x > 0
        out[mask] = log_scalar_mul(lambda_pos, x[mask])
    if lambda_neg is not None:
        mask = x < 0
        out[mask] = log_scalar_mul(lambda_neg, x[mask])
    return GrayImage(out)


# -- pipeline -----------------------------------------------------------------

@dataclass
class EnhanceOptions:
    translate: bool = True
    homothety: bool = True
    tol: float = 1e-12
    max_iter: int = 50


@dataclass
class SideResult:
    lam: float | None = None
    iterations: int = 0
    residual: float = 0.0
    converged: bool = True
    skipped: str | None = None


@dataclass
class EnhancementReport:
    w0: float = 0.0
    lambda_pos: float | None = None
    lambda_neg: float | None = None
    vm_before: float = 0.0
    vm_after: float = 0.0
    iterations_pos: int = 0
    iterations_neg: int = 0
    residual_pos: float = 0.0
    residual_neg: float = 0.0
    converged: bool = True
    degenerate: bool = False
    notes: list = field(default_factory=list)


def side_two_point(values) -> TwoPointSummary | None:
    """Logarithmic two-point summary of one side, or None if it has no spread."""
    if values.size < 2:
        return None
    stats = log_stats(values)
    if stats.degenerate:
        return None
    return solve_two_point_log(stats)


def optimize_side(values, negative: bool, tol=1e-12, max_iter=50) -> SideResult:
    tp = side_two_point(values)
    if tp is None:
        return SideResult(skipped="fewer than two distinct values")
    if negative:
        ok = -1.0 < tp.v_low < tp.v_high < 0.0
    else:
        ok = 0.0 < tp.v_low < tp.v_high < 1.0
    if not ok:
        return SideResult(skipped="two-point bounds not separated on this side")
    if negative:
        problem = HomothetyProblem.from_negative_bounds(tp.v_low, tp.v_high)
    else:
        problem = HomothetyProblem.from_bounds(tp.v_low, tp.v_high)
    if problem.u_low == problem.u_high:
        return SideResult(skipped="bounds coincide after rounding")
    try:
        lam, its, res = homothety_lambda(problem, tol, max_iter)
        return SideResult(lam, its, res)
    except NoConvergence as exc:
        log.warning("%s", exc)
        return SideResult(exc.last_lambda, exc.iterations, exc.residual, converged=False)


def enhance(f: GrayImage, options: EnhanceOptions | None = None):
    """Translate to the optimal brightness, then scale each sign optimally.

    Returns ``(enhanced_image, EnhancementReport)``.  Non-convergence of a
    side does not raise; its last iterate is used and the report says so.
    """
    opts = options or EnhanceOptions()
    report = EnhancementReport()
    report.vm_before = image_mean_dynamic_range(f)
    stats = log_stats(f)
    report.degenerate = stats.degenerate
    out = f

    if opts.translate:
        report.w0 = optimal_translation_offset(stats)
        out = translate(out, report.w0)

    if opts.homothety:
        split = split_signs(out)
        pos = optimize_side(split.positives, False, opts.tol, opts.max_iter)
        neg = optimize_side(split.negatives, True, opts.tol, opts.max_iter)
        report.lambda_pos, report.iterations_pos, report.residual_pos = pos.lam, pos.iterations, pos.residual
        report.lambda_neg, report.iterations_neg, report.residual_neg = neg.lam, neg.iterations, neg.residual
        report.converged = pos.converged and neg.converged
        for name, side in (("positive", pos), ("negative", neg)):
            if side.skipped:
                report.notes.append(f"{name} side skipped: {side.skipped}")
        out = apply_sign_homothety(out, pos.lam, neg.lam)

    report.vm_after = image_mean_dynamic_range(out)
    return out, report
