#!/usr/bin/env python3
"""Draw random versors, push them through the double cover and back.

Example:
    python scripts/roundtrip_demo.py --signature 1,3 --count 10 --seed 7
"""

import argparse

import numpy as np

from rotorlift import (
    CenterProjectionVanishesError,
    Signature,
    canonicalize_sign,
    forward_matrix,
    random_versor,
    recover_spin,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--signature", default="1,3", help="p,q")
    parser.add_argument("--count", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    p, q = (int(x) for x in args.signature.split(","))
    sig = Signature(p, q)

    print(f"{sig}: matrix -> spin element -> matrix round trips")
    print(f"{'k':>2} {'groups':<28} {'residual':>10} {'matrix diff':>12} {'spin diff':>12}")
    ks = (0, 2, 4) if sig.n % 2 == 0 else (0, 1, 2, 3, 4)
    for i in range(args.count):
        k = ks[i % len(ks)]
        s = random_versor(sig, k, seed=args.seed * 1000 + i)
        matrix = forward_matrix(s)
        try:
            result = recover_spin(matrix)
        except CenterProjectionVanishesError:
            print(f"{k:>2} {'(degenerate: no central part)':<28}")
            continue
        back = forward_matrix(result.spin)
        matrix_diff = np.max(np.abs(back.entries - matrix.entries))
        spin_diff = np.max(np.abs(result.spin.coeffs - canonicalize_sign(s).coeffs))
        groups = ",".join(result.groups.group_names())
        print(f"{k:>2} {groups:<28} {result.residual:>10.2e} {matrix_diff:>12.2e} {spin_diff:>12.2e}")


if __name__ == "__main__":
    main()
