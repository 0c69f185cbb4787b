#!/usr/bin/env python3
"""How fast does the homothety fixed-point recurrence settle?

For random problems (bounds uniform in (0, 1)) and for problems taken from
the two sides of centered random images, report the fraction with
|h'(lam_k)| below a threshold after k iterations from the seed.

    python scripts/homothety_convergence.py --count 2000
"""
import argparse

import numpy as np

from lipenhance.enhancement import (
    HomothetyProblem,
    h_homothety_prime,
    lambda_iterates,
    optimal_translation_offset,
    side_two_point,
    split_signs,
    translate,
)
from lipenhance.gray_algebra import GrayImage
from lipenhance.range_statistics import log_stats
from lipenhance.synthetic import random_gray_values


def uniform_problems(rng, count):
    out = []
    while len(out) < count:
        a, b = np.sort(rng.uniform(0, 1, 2))
        if a > 1e-3 and b < 1 - 1e-3 and b - a > 1e-3:
            out.append(HomothetyProblem.from_bounds(a, b))
    return out


def image_problems(rng, count):
    out = []
    while len(out) < count:
        f = GrayImage(random_gray_values(rng, int(rng.integers(64, 4096))).reshape(1, -1))
        g = translate(f, optimal_translation_offset(log_stats(f)))
        split = split_signs(g)
        for values, sign in ((split.positives, 1), (-split.negatives, 1)):
            tp = side_two_point(values)
            if tp is not None and 0 < tp.v_low < tp.v_high < 1:
                out.append(HomothetyProblem.from_bounds(tp.v_low, tp.v_high))
    return out[:count]


def table(name, problems, steps=10, thresholds=(1e-6, 1e-9)):
    res = np.array([[abs(h_homothety_prime(lam, p)) for lam in lambda_iterates(p, steps)]
                    for p in problems])
    print(f"\n{name}: {len(problems)} problems")
    print("  k  " + "  ".join(f"|h'|<{t:.0e}" for t in thresholds) + "   worst |h'|")
    for k in range(steps + 1):
        cols = "  ".join(f"{np.mean(res[:, k] < t):10.3f}" for t in thresholds)
        print(f"  {k:<3}{cols}   {res[:, k].max():.2e}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    rng = np.random.default_rng(args.seed)
    table("uniform bounds", uniform_problems(rng, args.count))
    table("image sides", image_problems(rng, args.count))


if __name__ == "__main__":
    main()
