"""
Relation vectors over a fixed generator basis.

AS is absorbed into canonical signs; what remains of it over the integers
is the 2-torsion of degenerate generators (rows ``2G = 0``).  IHX, LOOP and
the two brane brackets are produced here as :class:`DiagramVector` lists.
"""
from __future__ import annotations

from dataclasses import dataclass

from .enumeration import GeneratorBasis
from .graphs import (
    STAR,
    ColoredGraph,
    DiagramVector,
    GraphError,
    LegLabel,
    accumulate,
    expand,
    glue_legs,
)
from .homology import ManifoldModel

__all__ = [
    "RELATION_NAMES",
    "RelationSet",
    "ihx_at",
    "ihx_relations",
    "as_relations",
    "loop_relations",
    "star_leg",
    "bracket_terms",
    "bracket_closed",
    "br_relations",
    "bracket_open",
    "obr_relations",
]

RELATION_NAMES = ("as", "ihx", "loop", "br", "obr")


@dataclass(frozen=True)
class RelationSet:
    selection: frozenset

    def __post_init__(self):
        sel = frozenset(s.lower() for s in self.selection)
        unknown = sel - set(RELATION_NAMES)
        if unknown:
            raise ValueError(f"unknown relation(s) {sorted(unknown)}")
        if "obr" in sel and "br" not in sel:
            raise ValueError("OBR requires BR: the open quotient is taken after the closed one")
        object.__setattr__(self, "selection", sel)

    @classmethod
    def parse(cls, text: str) -> RelationSet:
        return cls(frozenset(t.strip() for t in text.split(",") if t.strip()))

    def __contains__(self, name):
        return name.lower() in self.selection


def _dedupe(vectors):
    seen, out = set(), []
    for v in vectors:
        if not v:
            continue
        # a relation and its negative span the same thing
        items = tuple(v.items())
        if items[0][1] < 0:
            items = tuple((k, -c) for k, c in items)
        if items not in seen:
            seen.add(items)
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# AS, IHX, LOOP


def ihx_at(g: ColoredGraph, edge) -> DiagramVector:
    """Jacobi relation at an internal edge, as the sum of its three terms.

    With cyclic orders (e, a, b) at one end and (e, c, d) at the other the
    terms are (e,a,b)(e,c,d) + (e,b,c)(e,a,d) + (e,c,a)(e,b,d), i.e. the
    identity f_abe f_ecd + f_bce f_ead + f_cae f_ebd = 0.
    """
    h1, h2 = edge
    u, w = h1 // 3, h2 // 3
    if u == w or max(h1, h2) >= 3 * g.degree:
        raise GraphError("IHX needs an edge between two distinct trivalent vertices")
    sa, sb = 3 * u + (h1 % 3 + 1) % 3, 3 * u + (h1 % 3 + 2) % 3
    sc, sd = 3 * w + (h2 % 3 + 1) % 3, 3 * w + (h2 % 3 + 2) % 3
    moves = (
        {},
        {sa: sc, sb: sa, sc: sb},  # a -> w.1, b -> u.1, c -> u.2
        {sa: sb, sb: sc, sc: sa},  # a -> u.2, b -> w.1, c -> u.1
    )
    pairs = []
    for sigma in moves:
        edges = [(sigma.get(x, x), sigma.get(y, y)) for x, y in g.edges]
        pairs.append((ColoredGraph.build(g.degree, g.legs, edges), 1))
    return accumulate(g.degree, pairs)


def ihx_relations(basis: GeneratorBasis) -> list:
    out = []
    for cg in basis.all:
        g = cg.graph()
        for e in g.internal_edges():
            out.append(ihx_at(g, e))
    return _dedupe(out)


def as_relations(basis: GeneratorBasis) -> list:
    """Degenerate generators; each stands for the integral relation 2G = 0."""
    return list(basis.degenerates)


def loop_relations(basis: GeneratorBasis) -> list:
    return [DiagramVector(basis.degree, {cg: 1}) for cg in basis.all if cg.graph().has_loop()]


# ---------------------------------------------------------------------------
# brane brackets


def star_leg(g: ColoredGraph, star=None) -> int:
    if star is not None:
        if not (0 <= star < len(g.legs)):
            raise GraphError("star leg index out of range")
        return star
    found = [j for j, l in enumerate(g.legs) if l == STAR]
    if len(found) != 1:
        raise GraphError("graph needs exactly one star leg")
    return found[0]


def bracket_terms(g: ColoredGraph, weight, star=None) -> list:
    """``[(weight(color(l)), G_l)]`` over the non-star legs ``l``.

    ``G_l`` glues the star leg to leg ``l``.  ``weight`` may return anything
    (integers for the relation, strings for a symbolic check).
    """
    st = star_leg(g, star)
    out = []
    for l, color in enumerate(g.legs):
        if l == st:
            continue
        if not isinstance(color, str):
            raise GraphError("brackets need single-color legs")
        out.append((weight(color), glue_legs(g, st, l)))
    return out


def bracket_closed(g: ColoredGraph, s: int, model: ManifoldModel, star=None) -> DiagramVector:
    """Sum over non-star legs of ([Sigma_s].[c_l]) G_l; the empty sum is 0."""
    row = dict(zip(model.alphabet, model.h2[s].pairing))
    terms = bracket_terms(g, lambda c: row[c], star)
    return accumulate(g.degree, [(h, c) for c, h in terms])


def br_relations(star_basis: GeneratorBasis, model: ManifoldModel) -> list:
    out = []
    for cg in star_basis.all:
        g = cg.graph()
        for s in range(len(model.h2)):
            out.append(bracket_closed(g, s, model))
    return _dedupe(out)


def bracket_open(g: ColoredGraph, kernel, pairing, model: ManifoldModel, star=None) -> DiagramVector:
    """G with the star recolored by ``kernel`` plus the pairing-weighted gluings."""
    kernel, pairing = tuple(kernel), tuple(pairing)
    if not model.is_nullhomologous(kernel):
        raise GraphError(f"kernel vector {kernel} is not nullhomologous")
    if not any(kernel):
        raise GraphError("kernel vector must be a nonzero combination")
    st = star_leg(g, star)
    label = LegLabel.of(dict(zip(model.alphabet, kernel)))
    legs = list(g.legs)
    legs[st] = label.single or label
    head = expand(ColoredGraph.build(g.degree, legs, g.edges))
    weights = dict(zip(model.alphabet, pairing))
    terms = bracket_terms(g, lambda c: weights[c], st)
    return head + accumulate(g.degree, [(h, c) for c, h in terms])


def obr_relations(star_basis: GeneratorBasis, model: ManifoldModel) -> list:
    out = []
    for cg in star_basis.all:
        g = cg.graph()
        for surf in model.obr_surfaces:
            out.append(bracket_open(g, surf.kernel, surf.pairing, model))
    return _dedupe(out)
