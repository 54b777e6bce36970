import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors as sympy_factors

from clover.enumeration import enumerate_basis
from clover.graphs import DiagramVector, GraphError, canonicalize, parse_graph
from clover.homology import closed_rational_model
from clover.quotient import group_quotient, present_quotient, relation_system
from oracles import dense_rank

THETA = parse_graph("deg=2; legs=[]; edges=[v0.0-v1.0, v0.1-v1.1, v0.2-v1.2]")


def dense(basis, rels, ring):
    cols = list(basis.generators) if ring == "Q" else list(basis.all)
    idx = {cg: j for j, cg in enumerate(cols)}
    rows = []
    for v in rels:
        r = [0] * len(cols)
        for cg, c in v.items():
            if cg in idx:
                r[idx[cg]] = c
        rows.append(r)
    if ring == "Z":
        for cg in basis.degenerates:
            r = [0] * len(cols)
            r[idx[cg]] = 2
            rows.append(r)
    return rows, len(cols)


def oracle_invariants(basis, rels, ring):
    rows, n = dense(basis, rels, ring)
    if ring == "Q":
        return n - dense_rank(rows, n), ()
    if not rows:
        return n, ()
    facs = [int(x) for x in sympy_factors(Matrix(rows), domain=ZZ) if x]
    return n - len(facs), tuple(f for f in facs if f > 1)


CASES = [
    (None, 2, "Aphi"),
    (None, 3, "Aphi"),
    (closed_rational_model(1), 2, "Ao"),
    (closed_rational_model(1), 3, "B"),
    (closed_rational_model(0, [3]), 3, "Ao"),
    (closed_rational_model(1, [3]), 2, "Ao"),
    (closed_rational_model(2), 2, "A"),
]


@pytest.mark.parametrize("ring", ["Q", "Z"])
@pytest.mark.parametrize("model,degree,group", CASES)
def test_against_dense_oracle(model, degree, group, ring):
    basis, rels = relation_system(model, degree, group)
    q = present_quotient(basis, rels, ring)
    assert (q.free_rank, q.torsion) == oracle_invariants(basis, rels, ring)


def test_aphi_low_degrees():
    assert [group_quotient(None, d, "Aphi", "Q").free_rank for d in (0, 1, 2)] == [1, 0, 1]


def test_degree_zero_rank_one():
    for m in (None, closed_rational_model(2)):
        assert group_quotient(m, 0, "Ao", "Q").free_rank == 1


def test_theta_coordinates():
    theta = DiagramVector.from_graph(THETA)
    assert not group_quotient(None, 2, "Aphi", "Q").is_zero(theta)
    assert group_quotient(closed_rational_model(1), 2, "Ao", "Q").is_zero(theta)


def test_legless_degree_two_vanish():
    q = group_quotient(closed_rational_model(1), 2, "Ao", "Q")
    for cg in enumerate_basis(2).all:
        assert q.is_zero(DiagramVector(2, {cg: 1}))


@pytest.mark.parametrize("ring", ["Q", "Z"])
def test_relations_vanish_and_reps_do_not(ring):
    m = closed_rational_model(1, [3])
    basis, rels = relation_system(m, 2, "Ao")
    q = present_quotient(basis, rels, ring)
    for r in rels:
        assert q.is_zero(r)
    coords = [q.coordinates(v) for v in q.basis_representatives]
    k = q.free_rank + len(q.torsion)
    assert len(coords) == k
    for i, c in enumerate(coords):
        assert c[i] == 1 and not any(c[j] for j in range(k) if j != i)


def test_integral_torsion_example():
    q = group_quotient(closed_rational_model(1), 4, "Ao", "Z")
    assert q.free_rank == 2 and q.torsion == (2, 2, 10)
    assert all(b % a == 0 for a, b in zip(q.torsion, q.torsion[1:]))


def test_torsion_coordinates_are_residues():
    q = group_quotient(closed_rational_model(1), 4, "Ao", "Z")
    for v in q.basis_representatives:
        c = q.coordinates(v * 10)
        for t, d in zip(c[q.free_rank:], q.torsion):
            assert 0 <= t < d


@settings(max_examples=15)
@given(st.integers(0, 10**6))
def test_invariant_under_relation_permutation_and_appending(seed):
    rng = random.Random(seed)
    m = closed_rational_model(1, [3])
    basis, rels = relation_system(m, 2, "Ao")
    ref = present_quotient(basis, rels, "Z")
    shuffled = list(rels)
    rng.shuffle(shuffled)
    extra = []
    for _ in range(3):
        a, b = rng.sample(rels, 2)
        extra.append(a * rng.randint(-5, 5) + b * rng.randint(-5, 5))
    q = present_quotient(basis, shuffled + extra, "Z")
    assert (q.free_rank, q.torsion) == (ref.free_rank, ref.torsion)
    v = DiagramVector(2, {rng.choice(basis.all): 1})
    assert q.is_zero(v) == ref.is_zero(v)


@pytest.mark.parametrize("model", [closed_rational_model(1), closed_rational_model(1, [3]), closed_rational_model(0, [3])])
@pytest.mark.parametrize("degree", [1, 2, 3])
def test_rank_monotone(model, degree):
    r = {g: group_quotient(model, degree, g, "Q").free_rank for g in ("B", "A", "Ao")}
    assert r["Ao"] <= r["A"] <= r["B"]


def test_leg_sector_is_exact_for_b():
    m = closed_rational_model(1)
    full = group_quotient(m, 3, "B", "Q").free_rank
    parts = sum(group_quotient(m, 3, "B", "Q", legs=[k]).free_rank for k in range(0, 6))
    assert parts == full


def test_errors():
    basis = enumerate_basis(2)
    with pytest.raises(ValueError):
        present_quotient(basis, [], "R")
    with pytest.raises(GraphError):
        present_quotient(basis, [DiagramVector.from_graph(parse_graph("deg=1; legs=[x,y,z]; edges=[v0.0-l0, v0.1-l1, v0.2-l2]"))], "Q")
    q = present_quotient(basis, [], "Q")
    with pytest.raises(GraphError):
        q.coordinates(DiagramVector.from_graph(parse_graph("deg=1; legs=[x,y,z]; edges=[v0.0-l0, v0.1-l1, v0.2-l2]")))
    with pytest.raises(ValueError):
        relation_system(None, 2, "C")
