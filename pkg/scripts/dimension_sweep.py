#!/usr/bin/env python3
"""Tabulate the closed-form coherence change across dimensions.

Prints one row per n with the hadamard-stage value, the final-stage value,
and their difference for each panel measure, plus the regime verdict.  With
--check-dense the small dimensions are re-derived from an actual simulated
oracle so the table is backed by the dense route, not just algebra.
"""

import argparse

import numpy as np

from simon_coherence import (
    REGIME_PANEL,
    Stage,
    classify_regime,
    coherence_delta,
    dense_coherence,
    density_of,
    final_stage_coherence,
    hadamard_stage_coherence,
    random_two_to_one,
    run_stages,
)

DENSE_LIMIT = 5


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=12)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--check-dense",
        action="store_true",
        help=f"cross-check rows with n <= {DENSE_LIMIT} against a simulated oracle",
    )
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    header = f"{'n':>3} {'dim':>8} {'regime':>10}"
    for measure in REGIME_PANEL:
        header += f" {measure.label():>22}"
    print(header)

    for n in range(1, args.n_max + 1):
        dim = 1 << n
        verdict = classify_regime(dim)
        row = f"{n:>3} {dim:>8} {verdict.regime:>10}"
        for measure in REGIME_PANEL:
            row += f" {coherence_delta(dim, measure):>22.12g}"
        print(row)

        if args.check_dense and n <= DENSE_LIMIT:
            s = int(rng.integers(1, dim))
            f = random_two_to_one(n, s, int(rng.integers(2**31)))
            stages = run_stages(f)
            rho_h = density_of(stages[Stage.HADAMARD])
            rho_f = density_of(stages[Stage.FINAL_HADAMARD])
            worst = 0.0
            for measure in REGIME_PANEL:
                worst = max(
                    worst,
                    abs(dense_coherence(rho_h, measure) - hadamard_stage_coherence(dim, measure)),
                    abs(dense_coherence(rho_f, measure) - final_stage_coherence(dim, measure)),
                )
            print(f"    dense check (s={s:0{n}b}): worst closed-form deviation {worst:.3e}")


if __name__ == "__main__":
    main()
