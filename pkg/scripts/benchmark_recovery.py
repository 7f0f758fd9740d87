#!/usr/bin/env python3
"""Time the recovery pipeline across dimensions.

The numerator sum touches all 2^n multi-indices, so the cost grows roughly
as n * 4^n; this script makes the crossover visible.

Example:
    python scripts/benchmark_recovery.py --max-n 10 --repeats 5
"""

import argparse
import time

from rotorlift import Signature, forward_matrix, random_versor, recover_spin, spin_numerator


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=10)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"{'signature':<10} {'build [ms]':>12} {'recover [ms]':>14} {'residual':>10}")
    for n in range(2, args.max_n + 1):
        sig = Signature((n + 1) // 2, n // 2)
        # four reflections keep the spin element even and generically
        # non-degenerate in every dimension
        matrices = [
            forward_matrix(random_versor(sig, 4, seed=args.seed + i))
            for i in range(args.repeats)
        ]
        start = time.perf_counter()
        for matrix in matrices:
            spin_numerator(matrix)
        build_ms = (time.perf_counter() - start) / args.repeats * 1e3

        start = time.perf_counter()
        worst = 0.0
        for matrix in matrices:
            worst = max(worst, recover_spin(matrix).residual)
        recover_ms = (time.perf_counter() - start) / args.repeats * 1e3
        print(f"{str(sig):<10} {build_ms:>12.2f} {recover_ms:>14.2f} {worst:>10.1e}")


if __name__ == "__main__":
    main()
