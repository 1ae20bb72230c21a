from fractions import Fraction

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from nestfan import linalg

small = st.integers(-4, 4)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


def leibniz(m):
    import itertools

    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = (-1) ** sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod *= m[i][perm[i]]
        total += sign * prod
    return total


@given(st.integers(1, 5).flatmap(square))
def test_det_matches_leibniz(m):
    assert linalg.det(m) == leibniz(m)


@given(st.integers(1, 4).flatmap(lambda n: st.lists(square(n), min_size=1, max_size=5)))
def test_batch_det(stack):
    got = linalg.batch_det_exact(np.array(stack, dtype=np.int64))
    assert [int(x) for x in got] == [leibniz(m) for m in stack]


@given(st.integers(1, 4).flatmap(square))
def test_inverse_roundtrip(m):
    if linalg.det(m) == 0:
        return
    inv = linalg.inverse(m)
    prod = [[sum(Fraction(a) * b for a, b in zip(row, col)) for col in zip(*inv)] for row in m]
    assert prod == [[int(i == j) for j in range(len(m))] for i in range(len(m))]


def test_batch_unimodular_inverse():
    stack = np.array([[[1, 0], [0, 1]], [[2, 1], [1, 1]], [[-1, -1], [-1, 0]]], dtype=np.int64)
    inv = linalg.batch_unimodular_inverse(stack)
    assert (np.matmul(stack, inv) == np.eye(2, dtype=np.int64)).all()
    assert linalg.batch_unimodular_inverse(np.array([[[2, 0], [0, 1]]])) is None
    assert linalg.batch_unimodular_inverse(np.array([[[1, 1], [1, 1]]])) is None


def test_rank_and_primitive():
    assert linalg.rank([[1, 2], [2, 4]]) == 1
    assert linalg.rank([]) == 0
    assert linalg.primitive((4, -6)) == (2, -3)
    assert linalg.is_primitive((1, 0)) and not linalg.is_primitive((2, 0))


def test_solve_exact():
    cols = [[1, 0], [1, 2]]
    x = linalg.solve(cols, [3, 4])
    assert x == [Fraction(1), Fraction(2)]
