#!/usr/bin/env python3
"""Cross-check the conversion frontier against the brute-force oracle.

For each (alpha, eps, delta) triple: compare gamma_exact with the 2-D grid
minimum, and check the q-star reduction; then sample random pairs to verify
none falls below the frontier.  Exits 1 if anything exceeds tolerance.
"""

import argparse
import sys
import time

from rdpopt.conversion import gamma_exact
from rdpopt.oracle import DEFAULT_SEED, GridSpec, brute_force_gamma, joint_range_containment, verify_q_star

TRIPLES = [
    (2.0, 1.0, 0.1),
    (5.0, 0.5, 0.05),
    (20.0, 1.0, 0.1),      # alpha*delta >= 1: boundary regime
    (49.0, 4.8, 0.49),     # worst measured grid error among stress points
    (10.0, 2.0, 1e-4),
    (1.5, 0.0, 0.3),
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grid-n", type=int, default=4096)
    parser.add_argument("--samples", type=int, default=20000)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--tol", type=float, default=1e-4)
    args = parser.parse_args()
    grid = GridSpec(n_coarse=args.grid_n, n_refine=args.grid_n)

    failed = False
    print(f"{'alpha':>6} {'eps':>5} {'delta':>7} {'gamma_exact':>18} {'brute_gap':>12} {'q_star_gap':>12} {'secs':>6}")
    for alpha, eps, delta in TRIPLES:
        t0 = time.perf_counter()
        exact = gamma_exact(alpha, eps, delta).value
        gap = brute_force_gamma(alpha, eps, delta, grid) - exact
        q_gap = verify_q_star(alpha, eps, delta, grid)["max_gap"]
        secs = time.perf_counter() - t0
        flag = ""
        if abs(gap) > args.tol or q_gap > args.tol:
            failed = True
            flag = "  <-- exceeds tol"
        print(f"{alpha:6.1f} {eps:5.2f} {delta:7.4f} {exact:18.12f} {gap:12.3e} {q_gap:12.3e} {secs:6.2f}{flag}")

    report = joint_range_containment(2.0, 1.0, n_samples=args.samples, seed=args.seed)
    print(
        f"containment: {report['violations']} violations over {args.samples} samples, "
        f"min margin {report['min_margin']:.3e}"
    )
    if report["violations"] != 0:
        failed = True
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
