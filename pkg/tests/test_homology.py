import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clover.homology import (
    LinkComponent,
    ManifoldModel,
    ModelError,
    closed_rational_model,
    load_model,
    parse_model,
)
from oracles import invariant_factors


def model(b1, torsion, classes):
    comps = tuple(
        LinkComponent(f"c{i}", tuple(f), tuple(t)) for i, (f, t) in enumerate(classes)
    )
    return ManifoldModel(b1, tuple(torsion), comps)


def test_spanning_examples():
    assert model(1, [], [([1], [])]).validate_spanning()
    assert not model(1, [], [([2], [])]).validate_spanning()
    assert model(0, [3], [([], [1]), ([], [2])]).validate_spanning()
    assert not model(0, [3], []).validate_spanning()


def test_kernel_examples():
    assert model(1, [], [([1], []), ([1], [])]).kernel_lattice() == [[1, -1]]
    assert model(1, [], [([1], [])]).kernel_lattice() == []
    assert model(0, [3], [([], [1])]).kernel_lattice() == [[3]]


@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(0, 5)), min_size=1, max_size=4))
def test_spanning_matches_invariant_factor_oracle(classes):
    # H_1 = Z + Z/6; spanning iff the augmented matrix has all unit invariant factors
    m = model(1, [6], [([f], [t]) for f, t in classes])
    rows = [[f, t] for f, t in classes] + [[0, 6]]
    facs = invariant_factors(rows)
    assert m.validate_spanning() == (len(facs) == 2 and facs == [1, 1])


@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(0, 5)), min_size=1, max_size=4))
def test_kernel_vectors_are_nullhomologous(classes):
    m = model(1, [6], [([f], [t]) for f, t in classes])
    kern = m.kernel_lattice()
    for k in kern:
        assert m.is_nullhomologous(k)
    # rank of the kernel is #components - rank of the free class map
    assert len(kern) == len(classes) - (1 if any(f for f, _ in classes) else 0)


def test_closed_rational_models():
    m = closed_rational_model(1)
    assert m.alphabet == ("x",) and m.pairing_matrix == ((1,),) and not m.obr_surfaces
    m0 = closed_rational_model(0)
    assert m0.pairing_matrix == () and m0.kernel_lattice() == []
    m3 = closed_rational_model(0, [3])
    assert m3.alphabet == ("t",) and m3.pairing_matrix == ()
    assert [s.kernel for s in m3.obr_surfaces] == [(3,)]
    m2 = closed_rational_model(1, [3])
    assert m2.validate() is m2


def test_model_invariants_rejected():
    with pytest.raises(ModelError):
        ManifoldModel(-1, (), ())
    with pytest.raises(ModelError):
        ManifoldModel(0, (4, 6), ())
    with pytest.raises(ModelError):
        model(1, [], [([1], []), ([1, 0], [])])
    with pytest.raises(ModelError):
        model(1, [], [([2], [])]).validate()


def test_json_round_trip_and_errors(tmp_path):
    m = closed_rational_model(2, [3])
    assert parse_model(m.dumps()) == m
    p = tmp_path / "m.json"
    p.write_text(m.dumps())
    assert load_model(p) == m
    d = json.loads(m.dumps())
    d["bogus"] = 1
    with pytest.raises(ModelError, match="unknown key"):
        parse_model(json.dumps(d))
    d = json.loads(m.dumps())
    d["h2_complete"] = False
    with pytest.raises(ModelError, match="h2_complete"):
        parse_model(json.dumps(d))
    with pytest.raises(ModelError, match="line 1"):
        parse_model("{not json")


def test_default_surfaces_filled_in():
    text = json.dumps({
        "b1": 1,
        "h2_complete": True,
        "link": [{"name": "x", "class_free": [1]}, {"name": "y", "class_free": [1]}],
        "h2_generators": [{"name": "S", "pairing": {"x": 1, "y": 1}}],
    })
    m = parse_model(text)
    assert [s.kernel for s in m.obr_surfaces] == [(1, -1)]
    assert m.obr_generates_kernel()


def test_restrict():
    m = closed_rational_model(1, [3])
    sub = m.restrict(["x"])
    assert sub.alphabet == ("x",) and sub.pairing_matrix == ((1,),) and not sub.obr_surfaces
