#!/usr/bin/env python3
"""Benchmark mask recovery: query counts and wall time per register size.

Each trial draws a fresh random two-to-one oracle, recovers its mask from
measurement samples alone, and double-checks the answer against the mask the
generator used.  The mean query count should hover around n, comfortably
inside the n+3 budget.
"""

import argparse
import time

import numpy as np

from simon_coherence import random_two_to_one, recover


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-min", type=int, default=2)
    parser.add_argument("--n-max", type=int, default=8)
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"{'n':>3} {'trials':>7} {'ok':>6} {'mean q':>8} {'max q':>6} {'sec':>8}")
    for n in range(args.n_min, args.n_max + 1):
        root = np.random.SeedSequence((args.seed, n))
        mask_rng = np.random.default_rng(root.spawn(1)[0])
        trial_seeds = root.spawn(args.trials)
        queries = []
        successes = 0
        start = time.perf_counter()
        for trial_seed in trial_seeds:
            s = int(mask_rng.integers(1, 1 << n))
            f = random_two_to_one(n, s, trial_seed)
            report = recover(f, trial_seed.spawn(1)[0])
            if report.verified and report.s_hat == s:
                successes += 1
            queries.append(report.queries)
        elapsed = time.perf_counter() - start
        print(
            f"{n:>3} {args.trials:>7} {successes:>6} "
            f"{sum(queries) / len(queries):>8.2f} {max(queries):>6} {elapsed:>8.2f}"
        )


if __name__ == "__main__":
    main()
