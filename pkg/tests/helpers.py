"""Shared oracles and generators for the test suite.

The oracles here are deliberately independent of the code paths they check:
the exponential is a plain power series, determinants expand over
permutations, and rotation matrices come from the classic axis-angle formula.
"""

from itertools import permutations

import numpy as np

from rotorlift import Multivector, Signature, geometric_product


def signatures_up_to(max_n: int) -> list[Signature]:
    return [Signature(p, n - p) for n in range(1, max_n + 1) for p in range(n + 1)]


def random_multivector(sig: Signature, rng, scale: float = 1.0) -> Multivector:
    return Multivector(sig, rng.uniform(-scale, scale, 1 << sig.n))


def exp_series(x: Multivector, terms: int = 40) -> Multivector:
    """exp(x) by direct power-series summation."""
    acc = Multivector.scalar(x.sig, 1.0)
    power = Multivector.scalar(x.sig, 1.0)
    for k in range(1, terms):
        power = geometric_product(power, x) / k
        acc = acc + power
    return acc


def leibniz_det(matrix: np.ndarray) -> float:
    """Determinant as the signed sum over permutations."""
    n = matrix.shape[0]
    total = 0.0
    for perm in permutations(range(n)):
        sign = 1.0
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = sign
        for i in range(n):
            term *= matrix[i, perm[i]]
        total += term
    return total


def rodrigues_rows(axis, angle: float) -> np.ndarray:
    """Rotation about a unit axis in row convention.

    Row a holds the coordinates of the rotated a-th basis vector, i.e. the
    transpose of the usual column-action matrix R = I + sin K + (1-cos) K^2.
    """
    u = np.asarray(axis, dtype=float)
    u = u / np.linalg.norm(u)
    k = np.array([[0.0, -u[2], u[1]], [u[2], 0.0, -u[0]], [-u[1], u[0], 0.0]])
    column_action = np.eye(3) + np.sin(angle) * k + (1.0 - np.cos(angle)) * (k @ k)
    return column_action.T


def rotation_plane_bivector(sig: Signature, axis) -> Multivector:
    """Unit bivector of the rotation plane for an axis in three dimensions."""
    u = np.asarray(axis, dtype=float)
    u = u / np.linalg.norm(u)
    return Multivector.from_terms(sig, {(2, 3): u[0], (1, 3): -u[1], (1, 2): u[2]})


def max_diff(a: Multivector, b: Multivector) -> float:
    return float(np.max(np.abs(a.coeffs - b.coeffs)))
