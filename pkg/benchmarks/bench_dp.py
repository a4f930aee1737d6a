"""Compare the compiled and pure-Python DP kernels on capacity workloads.

Run with:  python3 benchmarks/bench_dp.py
"""

import argparse
import random
import time
from fractions import Fraction

import numpy as np

from echcap._kernels import BACKEND, dp_round, dp_round_python
from echcap.capacities import _class_options, _ScaledClasses
from echcap.weights import WeightMultiset


def random_multiset(rng, n_classes, max_mult):
    entries = {}
    for _ in range(n_classes):
        entries[Fraction(rng.randint(1, 40), rng.randint(1, 40))] = rng.randint(
            1, max_mult
        )
    return WeightMultiset(entries.items())


def run_kernel(kernel, classes, budget):
    dp = np.zeros(budget + 1, dtype=np.int64)
    scratch = np.zeros(budget + 1, dtype=np.int64)
    choice = np.zeros(budget + 1, dtype=np.int32)
    start = time.perf_counter()
    for scaled, copies in zip(classes.scaled, classes.copies):
        costs, vals, _ = _class_options(scaled, copies, budget)
        kernel(
            dp,
            scratch,
            choice,
            np.asarray(costs, dtype=np.int64),
            np.asarray(vals, dtype=np.int64),
        )
        dp, scratch = scratch, dp
    return time.perf_counter() - start, int(dp[budget])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--budgets", default="2000,20000,100000,200000")
    parser.add_argument("--classes", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    print(f"compiled backend: {BACKEND}")
    print(f"{'budget':>8} {'compiled':>10} {'python':>10} {'speedup':>8}")
    for budget in (int(b) for b in args.budgets.split(",")):
        wm = random_multiset(rng, args.classes, 30)
        classes = _ScaledClasses(wm)
        t_c, v_c = run_kernel(dp_round, classes, budget)
        t_p, v_p = run_kernel(dp_round_python, classes, budget)
        assert v_c == v_p, "kernels disagree"
        print(f"{budget:>8} {t_c:>9.4f}s {t_p:>9.4f}s {t_p / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
