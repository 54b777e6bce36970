"""
Desk-scale checks of structural consequences of the relations.

Each check returns a :class:`CorollaryReport` of per-instance results.  An
instance whose hypotheses fail is reported ``n/a`` with the reason rather
than skipped.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from math import gcd

from .enumeration import DEFAULT_DEGREE_LIMIT, connected_shapes, enumerate_basis
from .graphs import (ColoredGraph, DiagramVector, LegLabel, accumulate, expand, format_graph,
                     canonicalize, graph_from_key, parse_graph)
from .homology import ManifoldModel, closed_rational_model
from .linalg import bareiss_rank
from .quotient import group_quotient, present_quotient, relation_system
from .relations import br_relations, obr_relations

__all__ = [
    "Instance",
    "CorollaryReport",
    "model_label",
    "check_basis_obr_vacuous",
    "check_br_vacuous",
    "check_legless_vanishing",
    "check_levine",
    "levine_terms",
    "levine_family",
    "h_graph",
    "check_rational_invariance",
    "rational_basis",
    "run_suite",
]

STATUSES = ("pass", "fail", "n/a")


@dataclass(frozen=True, order=True)
class Instance:
    model: str
    degree: int
    generator: str
    status: str
    detail: str = ""


@dataclass
class CorollaryReport:
    name: str
    degrees: tuple
    instances: list = field(default_factory=list)

    def add(self, model, degree, generator, status, detail=""):
        assert status in STATUSES
        self.instances.append(Instance(model, degree, str(generator), status, detail))

    @property
    def status(self) -> str:
        states = {i.status for i in self.instances}
        if "fail" in states:
            return "fail"
        return "pass" if "pass" in states else "n/a"

    @property
    def witnesses(self) -> list:
        return [i for i in sorted(self.instances) if i.status == "fail"]

    def counts(self) -> dict:
        return {s: sum(i.status == s for i in self.instances) for s in STATUSES}

    def lines(self, fmt="text", verbose=False):
        c = self.counts()
        degs = ",".join(map(str, self.degrees))
        if fmt == "machine":
            yield (f"corollary={self.name} degrees={degs} status={self.status} "
                   f"pass={c['pass']} fail={c['fail']} na={c['n/a']}")
            for i in sorted(self.instances):
                if verbose or i.status != "pass":
                    yield (f"instance corollary={self.name} model={i.model} degree={i.degree} "
                           f"generator={i.generator} status={i.status} detail={i.detail}")
            return
        yield f"{self.name} [degrees {degs}]: {self.status} ({c['pass']} pass, {c['fail']} fail, {c['n/a']} n/a)"
        for i in sorted(self.instances):
            if verbose or i.status != "pass":
                yield f"  {i.status:4} model {i.model} degree {i.degree} {i.generator} {i.detail}".rstrip()

    def __str__(self):
        return "\n".join(self.lines())


def model_label(m: ManifoldModel) -> str:
    tors = ",".join(map(str, m.torsion))
    return f"b1={m.b1};torsion=[{tors}];link=[{','.join(m.alphabet)}]"


def _degrees(degrees):
    return tuple(range(degrees + 1)) if isinstance(degrees, int) else tuple(degrees)


def _same(qa, qb):
    return (qa.free_rank, qa.torsion) == (qb.free_rank, qb.torsion)


def _free_rank(m: ManifoldModel, names) -> int:
    rows = [list(m.components[m.index(n)].class_free) for n in names]
    return bareiss_rank(rows) if rows and m.b1 else 0


def _affine_free(m: ManifoldModel, names) -> bool:
    """No rational relation sum c_i [y_i] = 0 has sum c_i != 0.

    Needed for x to stay independent of every y_i + n x.
    """
    rows = [list(m.components[m.index(n)].class_free) for n in names]
    if not rows:
        return True
    if not m.b1:
        return False
    # the all-ones vector must lie in the column space of the class matrix
    return bareiss_rank([r + [1] for r in rows]) == bareiss_rank(rows)


def _separating_surface(m: ManifoldModel, names) -> bool:
    """Some combination of h2 rows vanishes on ``names`` but not on every component."""
    cols = [m.index(n) for n in names]
    full = bareiss_rank([list(r) for r in m.pairing_matrix]) if m.h2 else 0
    part = bareiss_rank([[r[c] for c in cols] for r in m.pairing_matrix]) if m.h2 and cols else 0
    return full > part


# ---------------------------------------------------------------------------


def check_basis_obr_vacuous(model, degrees, *, label=None, degree_limit=DEFAULT_DEGREE_LIMIT):
    """Torsion-free basis links: OBR is empty, so A and A° agree over Z."""
    if isinstance(model, int):
        model = closed_rational_model(model)
    label = label or model_label(model)
    rep = CorollaryReport("basis_obr_vacuous", _degrees(degrees))
    is_basis = (
        not model.torsion and len(model.components) == model.b1 and model.validate_spanning()
    )
    for d in rep.degrees:
        if not is_basis:
            rep.add(label, d, "quotient", "n/a", "components are not a basis of a torsion-free H_1")
            continue
        star = enumerate_basis(d, model.alphabet, star=True, degree_limit=degree_limit)
        n_obr = len(obr_relations(star, model))
        qa = group_quotient(model, d, "A", "Z", degree_limit=degree_limit)
        qo = group_quotient(model, d, "Ao", "Z", degree_limit=degree_limit)
        ok = n_obr == 0 and _same(qa, qo)
        rep.add(label, d, "quotient", "pass" if ok else "fail",
                f"obr={n_obr} A={qa.summary()} Ao={qo.summary()}")
    return rep


def check_br_vacuous(model, degrees, *, label=None, degree_limit=DEFAULT_DEGREE_LIMIT):
    """Zero intersection pairing: BR is empty, so B and A agree over Z."""
    label = label or model_label(model)
    rep = CorollaryReport("br_vacuous", _degrees(degrees))
    zero = not any(x for row in model.pairing_matrix for x in row)
    for d in rep.degrees:
        if not zero:
            rep.add(label, d, "quotient", "n/a", "pairing matrix is nonzero")
            continue
        star = enumerate_basis(d, model.alphabet, star=True, degree_limit=degree_limit)
        n_br = len(br_relations(star, model))
        qb = group_quotient(model, d, "B", "Z", degree_limit=degree_limit)
        qa = group_quotient(model, d, "A", "Z", degree_limit=degree_limit)
        ok = n_br == 0 and _same(qb, qa)
        rep.add(label, d, "quotient", "pass" if ok else "fail",
                f"br={n_br} B={qb.summary()} A={qa.summary()}")
    return rep


def check_legless_vanishing(model, degrees, *, label=None, degree_limit=DEFAULT_DEGREE_LIMIT):
    """Generators with an internal edge whose colors do not span H_1 over Q vanish in A° over Q.

    Legless generators are the special case of the empty sublink.
    """
    label = label or model_label(model)
    rep = CorollaryReport("legless_vanishing", _degrees(degrees))
    for d in rep.degrees:
        if model.b1 == 0:
            rep.add(label, d, "legless", "n/a", "b1 = 0")
            continue
        basis, rels = relation_system(model, d, "Ao", degree_limit=degree_limit)
        q = present_quotient(basis, rels, "Q")
        tested = 0
        for cg in basis.generators:
            g = cg.graph()
            if not g.internal_edges():
                continue
            colors = sorted(set(g.legs))
            if _free_rank(model, colors) >= model.b1:
                continue
            tested += 1
            if not _separating_surface(model, colors):
                rep.add(label, d, format_graph(g), "n/a", "h2 data has no closed surface missing the sublink")
                continue
            coords = q.coordinates(DiagramVector(d, {cg: 1}))
            kind = "legless" if not colors else "sublink=" + ",".join(colors)
            rep.add(label, d, format_graph(g), "fail" if any(coords) else "pass", kind)
        if not tested:
            rep.add(label, d, "none", "n/a", "no generator meets the hypotheses")
    return rep


# ---------------------------------------------------------------------------
# replacing legs by x


def h_graph(legs) -> ColoredGraph:
    """Two trivalent vertices joined by an internal edge, legs in order (a, b | c, d)."""
    return parse_graph(
        f"deg=2; legs=[{','.join(legs)}]; edges=[v0.0-v1.0, v0.1-l0, v0.2-l1, v1.1-l2, v1.2-l3]"
    )


def levine_terms(g: ColoredGraph, x_leg: int, x: str):
    """``[G^(0), ..., G^(r)]``: sums over ways of recoloring k of the other legs by ``x``."""
    others = [l for l in range(len(g.legs)) if l != x_leg]
    out = []
    for k in range(len(others) + 1):
        pairs = []
        for subset in combinations(others, k):
            legs = [x if l in subset else c for l, c in enumerate(g.legs)]
            pairs.append((ColoredGraph.build(g.degree, legs, g.edges), 1))
        out.append(accumulate(g.degree, pairs))
    return out


def levine_shift(g: ColoredGraph, x_leg: int, x: str, n: int) -> DiagramVector:
    """G(n): every leg other than ``x_leg`` colored y becomes y + n x."""
    legs = [
        c if l == x_leg else (LegLabel.of({c: 1, x: n}) if n else c)
        for l, c in enumerate(g.legs)
    ]
    return expand(ColoredGraph.build(g.degree, legs, g.edges))


def levine_family(x="x", ys=("y",), degrees=(2, 3)):
    """(graph, x-leg) pairs over connected loop-free shapes of the given
    degrees with an internal edge: one x-leg, the others colored from ``ys``.
    Degree 2 contributes the H-graph and the two-leg bubble."""
    seen, fam = set(), []
    for shape in (graph_from_key(k) for d in degrees for k in connected_shapes(d)):
        n = len(shape.legs)
        if n < 2 or shape.has_loop() or not shape.internal_edges():
            continue
        for xl in range(n):
            for rest in product(ys, repeat=n - 1):
                it = iter(rest)
                legs = [x if l == xl else next(it) for l in range(n)]
                g = ColoredGraph.build(shape.degree, legs, shape.edges)
                key = canonicalize(g)[0]
                if key not in seen:
                    seen.add(key)
                    fam.append((g, xl))
    return fam


def check_levine(model, family, *, ns=(0, 1, 2, 3), label=None, degree_limit=DEFAULT_DEGREE_LIMIT):
    label = label or model_label(model)
    fam = list(family)
    rep = CorollaryReport("levine", tuple(sorted({g.degree for g, _ in fam})))
    quotients = {}
    for g, xl in fam:
        gtext = format_graph(g)
        x = g.legs[xl]
        ys = sorted({c for l, c in enumerate(g.legs) if l != xl})
        terms = levine_terms(g, xl, x)
        # polynomial identity, independent of the manifold
        for n in ns:
            lhs = levine_shift(g, xl, x, n)
            rhs = DiagramVector(g.degree)
            for k, t in enumerate(terms):
                rhs = rhs + t * (n ** k)
            rep.add(label, g.degree, f"{gtext} n={n}", "pass" if lhs == rhs else "fail",
                    "G(n) = sum_k n^k G^(k)")
        if not g.internal_edges():
            rep.add(label, g.degree, gtext, "n/a", "no internal edge")
            continue
        free_x = model.components[model.index(x)].class_free
        primitive = gcd(*free_x) == 1 if free_x else False
        independent = _free_rank(model, [x] + ys) == _free_rank(model, ys) + 1
        if not (primitive and independent):
            rep.add(label, g.degree, gtext, "n/a", "x is not primitive and independent of the y's")
            continue
        if g.degree not in quotients:
            quotients[g.degree] = tuple(
                group_quotient(model, g.degree, grp, "Q", degree_limit=degree_limit) for grp in ("B", "Ao")
            )
        qb, qo = quotients[g.degree]
        shifted_ok = _affine_free(model, [c for l, c in enumerate(g.legs) if l != xl])
        for k, t in enumerate(terms):
            if k and not shifted_ok:
                rep.add(label, g.degree, f"{gtext} k={k}", "n/a",
                        "y classes satisfy a rational relation with nonzero coefficient sum")
                continue
            ok = not any(qo.coordinates(t))
            alive = "nonzero" if any(qb.coordinates(t)) else "zero"
            rep.add(label, g.degree, f"{gtext} k={k}", "pass" if ok else "fail",
                    f"G^(k) = 0 in Ao over Q ({alive} in B)")
    return rep


# ---------------------------------------------------------------------------


def rational_basis(model: ManifoldModel) -> list:
    """Greedy choice of components whose free classes form a Q-basis."""
    chosen = []
    for c in model.components:
        if _free_rank(model, chosen + [c.name]) > len(chosen):
            chosen.append(c.name)
    return chosen


def check_rational_invariance(model, degrees, *, basis_names=None, ring="Q", label=None,
                              degree_limit=DEFAULT_DEGREE_LIMIT):
    """Q-rank of A(b) for a Q-basis sublink b equals the Q-rank of A°(b') for the full link b'.

    With ``ring="Z"`` the free ranks are compared and torsion is reported.
    """
    label = label or model_label(model)
    names = list(basis_names) if basis_names is not None else rational_basis(model)
    rep = CorollaryReport("rational_invariance", _degrees(degrees))
    sub = model.restrict(names)
    ok_basis = len(names) == model.b1 and _free_rank(model, names) == model.b1
    for d in rep.degrees:
        gen = f"b=[{','.join(names)}]"
        if not ok_basis:
            rep.add(label, d, gen, "n/a", "b is not a rational basis")
            continue
        qa = group_quotient(sub, d, "A", ring, degree_limit=degree_limit)
        qo = group_quotient(model, d, "Ao", ring, degree_limit=degree_limit)
        ok = qa.free_rank == qo.free_rank
        rep.add(label, d, gen, "pass" if ok else "fail", f"A(b)={qa.summary()} Ao(b')={qo.summary()}")
    return rep


def run_suite(model: ManifoldModel, degree_max: int, *, ring="Q", label=None,
              degree_limit=DEFAULT_DEGREE_LIMIT) -> list:
    """All checks applicable to one model, in a fixed order."""
    kw = dict(label=label or model_label(model), degree_limit=degree_limit)
    reports = [
        check_basis_obr_vacuous(model, degree_max, **kw),
        check_br_vacuous(model, degree_max, **kw),
        check_legless_vanishing(model, degree_max, **kw),
        check_rational_invariance(model, degree_max, ring=ring, **kw),
    ]
    fam = []
    degs = [d for d in (2, 3) if d <= degree_max]
    for x in model.alphabet:
        ys = tuple(n for n in model.alphabet if n != x)
        if ys and degs:
            fam += levine_family(x, ys, degs)
    if fam:
        reports.append(check_levine(model, fam, **kw))
    return sorted(reports, key=lambda r: r.name)
