import pytest

from clover.graphs import DiagramVector, LegLabel, expand, format_label
from clover.homology import H2Generator, LinkComponent, ManifoldModel, closed_rational_model
from clover.verification import (
    CorollaryReport,
    check_basis_obr_vacuous,
    check_br_vacuous,
    check_legless_vanishing,
    check_levine,
    check_rational_invariance,
    h_graph,
    levine_family,
    levine_shift,
    levine_terms,
    rational_basis,
    run_suite,
)


def equal_class_model():
    comps = (LinkComponent("x", (1,), ()), LinkComponent("y", (1,), ()))
    return ManifoldModel(1, (), comps, (H2Generator("S", (1, 1)),)).with_default_surfaces()


def zero_pairing_model():
    """Homology-cylinder-like: one free class whose dual surface misses the link."""
    comps = (LinkComponent("x", (1,), ()),)
    return ManifoldModel(1, (), comps, (H2Generator("S", (0,)),))


def test_basis_obr_vacuous():
    assert check_basis_obr_vacuous(2, [2]).status == "pass"
    assert check_basis_obr_vacuous(1, [3]).status == "pass"
    assert check_basis_obr_vacuous(equal_class_model(), [2]).status == "n/a"


def test_br_vacuous():
    assert check_br_vacuous(closed_rational_model(0, [3]), 3).status == "pass"
    assert check_br_vacuous(zero_pairing_model(), 3).status == "pass"
    assert check_br_vacuous(closed_rational_model(1), [2]).status == "n/a"


@pytest.mark.parametrize("b1", [1, 2])
def test_legless_vanishing(b1):
    rep = check_legless_vanishing(closed_rational_model(b1), [2, 4])
    assert rep.status == "pass"
    assert any(i.detail == "legless" and i.degree == 4 for i in rep.instances)


def test_legless_on_non_spanning_sublink():
    # components x, y of independent classes; only x meets the surface
    comps = (LinkComponent("x", (1, 0), ()), LinkComponent("y", (0, 1), ()))
    m = ManifoldModel(2, (), comps, (H2Generator("S_x", (1, 0)),), h2_complete=True).with_default_surfaces()
    rep = check_legless_vanishing(m, [2])
    ys = [i for i in rep.instances if i.detail == "sublink=y"]
    assert ys and all(i.status == "pass" for i in ys)


def test_legless_na_without_free_part():
    assert check_legless_vanishing(closed_rational_model(0, [3]), [2]).status == "n/a"


def test_levine_polynomial_identity():
    g = h_graph(["x", "y", "z", "y"])
    terms = levine_terms(g, 0, "x")
    assert levine_shift(g, 0, "x", 0) == terms[0] == expand(g)
    for n in (1, 2, 3):
        rhs = DiagramVector(2)
        for k, t in enumerate(terms):
            rhs = rhs + t * n ** k
        assert levine_shift(g, 0, "x", n) == rhs
    # n = 2 against a direct expansion of the relabeled graph
    lab = lambda c: format_label(LegLabel.of({c: 1, "x": 2}))
    direct = expand(h_graph(["x", lab("y"), lab("z"), lab("y")]))
    assert levine_shift(g, 0, "x", 2) == direct


def test_levine_family_closed_two():
    fam = levine_family("x", ("y",), (2,))
    assert fam and all(g.legs[xl] == "x" and g.legs.count("x") == 1 for g, xl in fam)
    rep = check_levine(closed_rational_model(2), fam)
    assert rep.status == "pass"
    ks = {int(i.generator.rsplit("k=", 1)[1]) for i in rep.instances if "k=" in i.generator}
    assert {0, 1, 2} <= ks


def test_levine_torsion_counterexample_is_guarded():
    """With y torsion, x + n y is not a shift of x by an independent class."""
    m = closed_rational_model(1, [3])
    fam = levine_family("x", ("t",), (2,))
    rep = check_levine(m, fam)
    assert rep.status != "fail"
    assert any("rational relation" in i.detail for i in rep.instances)


def test_rational_invariance():
    assert check_rational_invariance(closed_rational_model(1, [3]), 3, basis_names=["x"]).status == "pass"
    assert check_rational_invariance(closed_rational_model(1), 3).status == "pass"
    assert check_rational_invariance(closed_rational_model(0, [3]), 4).status == "pass"
    assert rational_basis(closed_rational_model(1, [3])) == ["x"]
    assert check_rational_invariance(closed_rational_model(1, [3]), [1], basis_names=["t"]).status == "n/a"


def test_report_status_and_format():
    r = CorollaryReport("demo", (1, 2))
    assert r.status == "n/a"
    r.add("m", 1, "g", "pass")
    r.add("m", 2, "h", "n/a", "guard")
    assert r.status == "pass"
    r.add("m", 2, "k", "fail", "witness")
    assert r.status == "fail" and [w.generator for w in r.witnesses] == ["k"]
    machine = list(r.lines("machine"))
    assert machine[0].startswith("corollary=demo degrees=1,2 status=fail pass=1 fail=1 na=1")
    assert len(machine) == 3
    assert len(list(r.lines("machine", verbose=True))) == 4
    with pytest.raises(AssertionError):
        r.add("m", 1, "g", "maybe")


def test_suite_is_ordered_and_passes():
    reps = run_suite(closed_rational_model(2), 2)
    assert [r.name for r in reps] == sorted(r.name for r in reps)
    assert all(r.status != "fail" for r in reps)
    assert "levine" in {r.name for r in reps}
