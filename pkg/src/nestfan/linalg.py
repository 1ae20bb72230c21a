"""Exact integer linear algebra on small dense matrices.

Pure-int routines (Bareiss determinant, Fraction elimination) are the
reference; the numpy batch routines are fast paths whose results are
checked exactly before use.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

Matrix = Sequence[Sequence[int]]

# entries beyond this could lose exactness in float inverses / int64 products
_SAFE_ENTRY = 1 << 20


def det(m: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    a = [list(map(int, row)) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(rows: Matrix) -> int:
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def solve(columns: Matrix, target: Sequence[int]) -> list[Fraction]:
    """Solve ``sum_k x_k * columns[k] == target`` for a square nonsingular system."""
    n = len(target)
    if len(columns) != n:
        raise ValueError("square system required")
    a = [[Fraction(columns[k][i]) for k in range(n)] + [Fraction(target[i])] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [a[i][n] for i in range(n)]


def inverse(m: Matrix) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def integer_inverse(m: Matrix) -> list[list[int]]:
    inv = inverse(m)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


def matmul(a: Matrix, b: Matrix) -> list[list[int]]:
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = math.gcd(*v) if v else 0
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def is_primitive(v: Sequence[int]) -> bool:
    return math.gcd(*v) == 1


def batch_unimodular_inverse(stack: np.ndarray) -> np.ndarray | None:
    """Integer inverses of a stack of unimodular int matrices.

    Returns ``None`` when any matrix is not unimodular, or when entries are too
    large for the exact int64 check.
    """
    if stack.size == 0:
        return stack.copy()
    if np.abs(stack).max() > _SAFE_ENTRY:
        return None
    try:
        approx = np.linalg.inv(stack.astype(float))
    except np.linalg.LinAlgError:
        return None
    inv = np.rint(approx).astype(np.int64)
    if np.abs(inv).max() > _SAFE_ENTRY:
        return None
    eye = np.eye(stack.shape[-1], dtype=np.int64)
    if not (np.matmul(stack, inv) == eye).all():
        return None
    return inv


def batch_det_exact(stack: np.ndarray) -> np.ndarray:
    """Exact determinants of a stack of small int matrices (Leibniz sum, int64)."""
    import itertools

    num, k, _ = stack.shape
    if k == 0:
        return np.ones(num, dtype=np.int64)
    bound = int(np.abs(stack).max(initial=0))
    if bound and k * math.log2(bound) + math.log2(math.factorial(k)) > 62:
        return np.array([det(m.tolist()) for m in stack], dtype=object)
    total = np.zeros(num, dtype=np.int64)
    cols = np.arange(k)
    for perm in itertools.permutations(range(k)):
        inversions = sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
        term = np.prod(stack[:, cols, list(perm)], axis=1)
        total += -term if inversions % 2 else term
    return total
