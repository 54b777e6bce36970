import io
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors as sympy_factors

from clover.linalg import (
    IntegerLattice,
    IntegerMatrix,
    RationalSpan,
    bareiss_rank,
    check_smith,
    determinant,
    hermite_normal_form,
    integer_left_kernel,
    smith_normal_form,
    xgcd,
)
from oracles import _det, dense_rank, invariant_factors

small = st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=4)


def random_sparse(rng, max_dim=20, bound=99, density=0.25):
    m, n = rng.randint(1, max_dim), rng.randint(1, max_dim)
    return [[rng.randint(-bound, bound) if rng.random() < density else 0 for _ in range(n)] for _ in range(m)]


def test_worked_example():
    a = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    u, d, v = smith_normal_form(a)
    assert d.diagonal() == [2, 6, 12]
    check_smith(a, u, d, v)


def test_zero_and_degenerate_shapes():
    for a in ([[0, 0], [0, 0]], [[0, 0, 3]], [[5], [0], [10]]):
        u, d, v, vi = smith_normal_form(a, with_inverse=True)
        check_smith(a, u, d, v, vi)


@given(small)
def test_smith_against_determinantal_divisors(a):
    u, d, v, vi = smith_normal_form(a, with_inverse=True)
    check_smith(a, u, d, v, vi)
    assert [x for x in d.diagonal() if x] == invariant_factors(a)


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_smith_against_sympy(seed):
    a = random_sparse(random.Random(seed), 12, 30, 0.4)
    _, d, _ = smith_normal_form(a)
    theirs = [int(x) for x in sympy_factors(Matrix(a), domain=ZZ) if x]
    assert [x for x in d.diagonal() if x] == theirs


@given(small)
def test_rank_and_determinant(a):
    assert bareiss_rank(a) == dense_rank(a, 3) == Matrix(a).rank()
    sq = [r[:3] for r in (a * 3)[:3]]
    assert determinant(sq) == _det(sq)


@given(small)
def test_hermite(a):
    h, u = hermite_normal_form(a)
    assert u @ IntegerMatrix.from_dense(a) == h
    assert abs(determinant(u.to_dense())) == 1
    hd = h.to_dense()
    lead = [next((j for j, x in enumerate(r) if x), None) for r in hd]
    nz = [c for c in lead if c is not None]
    assert nz == sorted(nz) and len(set(nz)) == len(nz)
    assert lead[len(nz):] == [None] * (len(lead) - len(nz))
    for i, c in enumerate(nz):
        assert hd[i][c] > 0
        assert all(0 <= hd[k][c] < hd[i][c] for k in range(i))


@given(small)
def test_left_kernel(a):
    kern = integer_left_kernel(a)
    for y in kern:
        assert all(sum(y[i] * a[i][j] for i in range(len(a))) == 0 for j in range(3))
    assert len(kern) == len(a) - bareiss_rank(a)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_xgcd(a, b):
    g, s, t = xgcd(a, b)
    assert g >= 0 and s * a + t * b == g
    assert (a == b == 0 and g == 0) or (a % g == 0 and b % g == 0)


@given(small)
def test_lattice_matches_smith(a):
    lat = IntegerLattice()
    for r in a:
        lat.add({j: x for j, x in enumerate(r)})
    lat.hermite()
    # the lattice has the same rank and the same index (product of invariant factors)
    assert len(lat) == bareiss_rank(a)
    prod_lat = 1
    for c, r in lat.rows.items():
        prod_lat *= r[c]
    basis = [[lat.rows[c].get(j, 0) for j in range(3)] for c in sorted(lat.rows)]
    assert invariant_factors(basis) == invariant_factors(a) if basis else not any(map(any, a))
    for r in a:
        assert {j: x for j, x in enumerate(r) if x} in lat


@given(small)
def test_rational_span(a):
    sp = RationalSpan()
    for r in a:
        sp.add({j: x for j, x in enumerate(r)})
    assert len(sp) == bareiss_rank(a)
    for r in a:
        assert not sp.reduce({j: x for j, x in enumerate(r)})
    # reduce is linear and kills pivots
    v = {0: 1, 1: -2, 2: 5}
    red = sp.reduce(v)
    assert all(isinstance(x, Fraction) for x in red.values())
    assert not set(red) & set(sp.rows)


def test_matrix_dump_round_trip():
    a = IntegerMatrix.from_dense([[0, 3], [-1, 0], [0, 0]])
    buf = io.StringIO()
    a.dump(buf)
    buf.seek(0)
    assert IntegerMatrix.load(buf) == a


def test_check_smith_detects_corruption():
    a = [[2, 4], [6, 8]]
    u, d, v = smith_normal_form(a)
    bad = IntegerMatrix(2, 2, dict(d.entries))
    bad.entries[0, 0] = 3
    with pytest.raises(AssertionError):
        check_smith(a, u, bad, v)
