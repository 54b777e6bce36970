import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clover.enumeration import enumerate_basis
from clover.graphs import STAR, ColoredGraph, DiagramVector, GraphError, canonicalize, parse_graph
from clover.homology import H2Generator, LinkComponent, ManifoldModel, ObrSurface, closed_rational_model
from clover.relations import (
    RelationSet,
    bracket_closed,
    bracket_open,
    bracket_terms,
    br_relations,
    ihx_at,
    ihx_relations,
    loop_relations,
    obr_relations,
)
from helpers import random_graph, relabel, slot_map
from oracles import raw_graphs, to_edges

THETA = parse_graph("deg=2; legs=[]; edges=[v0.0-v1.0, v0.1-v1.1, v0.2-v1.2]")
DUMBBELL = parse_graph("deg=2; legs=[]; edges=[v0.0-v1.0, v0.1-v0.2, v1.1-v1.2]")


def two_component_model(pairing=(0, 0)):
    comps = (LinkComponent("x", (1,), ()), LinkComponent("y", (1,), ()))
    return ManifoldModel(1, (), comps, (H2Generator("S", (1, 1)),), (ObrSurface((1, -1), pairing),))


def star_h(legs):
    a, b, c = legs
    return parse_graph(
        f"deg=2; legs=[*,{a},{b},{c}]; edges=[v0.0-v1.0, v0.1-l0, v0.2-l1, v1.1-l2, v1.2-l3]"
    )


def _up_to_sign(vs):
    out = set()
    for v in vs:
        items = tuple(v.items())
        if items and items[0][1] < 0:
            items = tuple((k, -c) for k, c in items)
        if items:
            out.add(items)
    return out


def test_ihx_theta_support():
    keys = {canonicalize(THETA)[0], canonicalize(DUMBBELL)[0]}
    for e in THETA.internal_edges():
        v = ihx_at(THETA, e)
        assert set(v.keys()) <= keys


def test_no_internal_edge_no_relation():
    b = enumerate_basis(1, ("x", "y", "z"))
    assert ihx_relations(b) == []


def test_ihx_count_matches_all_labelings():
    """IHX at every edge of every labeled graph spans the same rows as on canonical reps."""
    basis = enumerate_basis(2, ("x",))
    ours = _up_to_sign(ihx_relations(basis))
    slow = []
    for g in raw_graphs(2, ("x",)):
        legs, edges = to_edges(*g)
        cg = ColoredGraph.build(2, legs, edges)
        slow += [ihx_at(cg, e) for e in cg.internal_edges()]
    assert _up_to_sign(slow) == ours


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_ihx_is_labeling_independent(seed):
    """IHX at an edge is the same relation (up to sign) however the graph is labeled."""
    rng = random.Random(seed)
    g = random_graph(rng, 3, ("x",))
    n = g.degree
    vperm = list(range(n))
    rng.shuffle(vperm)
    rot = [rng.randrange(3) for _ in range(n)]
    flips = [rng.randrange(2) for _ in range(n)]
    h, _ = relabel(g, vperm, rot, flips, list(range(len(g.legs))))
    slot = slot_map(g, vperm, rot, flips)
    for a, b in g.internal_edges():
        v1 = ihx_at(g, (a, b))
        v2 = ihx_at(h, (slot[a], slot[b]))
        assert v1 == v2 or v1 == -v2


def test_loop_examples():
    b = enumerate_basis(2)
    rels = loop_relations(b)
    assert rels == [DiagramVector(2, {canonicalize(DUMBBELL)[0]: 1})]
    lolly = parse_graph("deg=1; legs=[x]; edges=[v0.0-v0.1, v0.2-l0]")
    assert any(canonicalize(lolly)[0] in r.keys() for r in loop_relations(enumerate_basis(1, ("x",))))


def test_bracket_symbolic_example():
    g = star_h(("x", "x", "y"))
    terms = bracket_terms(g, lambda c: f"[S].[{c}]")
    assert [w for w, _ in terms] == ["[S].[x]", "[S].[x]", "[S].[y]"]
    from clover.graphs import glue_legs

    assert [h for _, h in terms] == [glue_legs(g, 0, l) for l in (1, 2, 3)]


def test_bracket_star_only_is_zero():
    g = parse_graph("deg=1; legs=[*]; edges=[v0.0-v0.1, v0.2-l0]")
    assert bracket_terms(g, lambda c: 1) == []
    m = closed_rational_model(1)
    assert not bracket_closed(g, 0, m)


def test_bracket_unit_pairing():
    m = closed_rational_model(1)
    g = star_h(("x", "x", "x"))
    from clover.graphs import accumulate, glue_legs

    expected = accumulate(2, [(glue_legs(g, 0, l), 1) for l in (1, 2, 3)])
    assert bracket_closed(g, 0, m) == expected


def test_br_empty_and_zero_pairing():
    b = enumerate_basis(2, ("t",), star=True)
    assert br_relations(b, closed_rational_model(0, [3])) == []
    zero = ManifoldModel(1, (), (LinkComponent("x", (1,), ()),), (H2Generator("S", (0,)),))
    assert br_relations(enumerate_basis(2, ("x",), star=True), zero) == []


def test_obr_zero_pairing_example():
    m = two_component_model()
    g = star_h(("x", "x", "y"))
    v = bracket_open(g, (1, -1), (0, 0), m)
    gx = DiagramVector.from_graph(g.with_legs(["x", "x", "x", "y"]))
    gy = DiagramVector.from_graph(g.with_legs(["y", "x", "x", "y"]))
    assert v == gx - gy


def test_obr_rejects_non_nullhomologous_kernel():
    m = two_component_model()
    with pytest.raises(GraphError):
        bracket_open(star_h(("x", "x", "y")), (1, 1), (0, 0), m)


def test_obr_vacuous_on_basis_and_present_for_torsion():
    assert obr_relations(enumerate_basis(2, ("x", "y"), star=True), closed_rational_model(2)) == []
    rels = obr_relations(enumerate_basis(1, ("t",), star=True), closed_rational_model(0, [3]))
    assert rels


@settings(max_examples=20)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 10**6))
def test_pairing_shift_by_p_row_is_a_br_relation(p0, p1, seed):
    """Changing the surface by a closed one changes the OBR vector by the BR vector."""
    m = two_component_model()
    rng = random.Random(seed)
    star = enumerate_basis(rng.choice([1, 2]), ("x", "y"), star=True)
    for cg in star.all:
        g = cg.graph()
        base = bracket_open(g, (1, -1), (p0, p1), m)
        shifted = bracket_open(g, (1, -1), (p0 + 1, p1 + 1), m)
        assert shifted - base == bracket_closed(g, 0, m)


def test_relation_set_parsing():
    assert "ihx" in RelationSet.parse("AS, IHX")
    with pytest.raises(ValueError):
        RelationSet.parse("ihx,foo")
    with pytest.raises(ValueError):
        RelationSet.parse("obr")
