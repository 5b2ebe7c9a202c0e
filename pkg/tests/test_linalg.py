import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from toric_ccc import linalg as la

matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def test_rref_and_rank_small():
    r, piv = la.rref([[1, 2], [2, 4]])
    assert piv == [0]
    assert r[0] == [1, 2]
    assert la.rank([[1, 2], [2, 4]]) == 1
    assert la.rank([[0, 0]]) == 0


def test_det_and_inverse():
    a = la.mat([[2, 1], [1, 1]])
    assert la.det(a) == 1
    assert la.matmul(a, la.inverse(a)) == la.identity(2)
    assert la.det([[1, 2], [2, 4]]) == 0


def test_solve_inconsistent():
    assert la.solve([[1, 1], [1, 1]], [1, 2], 2) is None
    assert la.solve([[1, 0], [0, 2]], [1, 1], 2) == (1, Fraction(1, 2))


def test_subspaces():
    u = la.span([(1, 0, 0), (0, 1, 0)], 3)
    v = la.span([(0, 1, 0), (0, 0, 1)], 3)
    assert len(la.subspace_intersection(u, v, 3)) == 1
    assert len(la.subspace_sum(u, v, 3)) == 3
    assert la.in_span((0, 5, 0), la.subspace_intersection(u, v, 3), 3)


def test_primitive_and_minors():
    assert la.primitive((2, -4)) == (1, -2)
    assert la.is_primitive((1, 2))
    assert not la.is_primitive((2, 4))
    assert la.minors_gcd([(1, 0), (1, 2)]) == 2
    assert la.minors_gcd([(1, 0), (1, 1)]) == 1


def test_fmt():
    assert la.fmt(Fraction(-3, 4)) == "-3/4"
    assert la.fmt(Fraction(5)) == "5"


@given(matrices)
def test_nullspace_is_kernel(a):
    n = len(a[0])
    k = la.nullspace(a, n)
    assert len(k) == n - la.rank(a)
    for v in k:
        assert all(x == 0 for x in la.matvec(a, v))


@given(matrices)
def test_sparse_rank_matches_dense(a):
    assert la.sparse_rank(a) == la.rank(a)


def test_sparse_rank_rational_entries():
    rng = random.Random(3)
    for _ in range(30):
        a = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(5)] for _ in range(4)]
        assert la.sparse_rank(a) == la.rank(a)
