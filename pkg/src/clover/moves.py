"""
Moves between spanning links and the induced maps on graph groups.

M1 band-sums one component into another, M2 changes a framing by +-1 and
M3 inserts or deletes a nullhomologous zero-framed component.  Each move
transforms the manifold model and comes with a map on diagram vectors and
its inverse; :func:`verify_isomorphism` checks that the pair descends to
mutually inverse isomorphisms of the open quotients.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from .graphs import (
    ColoredGraph,
    DiagramVector,
    GraphError,
    LegLabel,
    accumulate,
    canonicalize,
    expand,
)
from .homology import H2Generator, LinkComponent, ManifoldModel, ModelError, ObrSurface
from .linalg import IntegerMatrix
from .quotient import present_quotient, relation_system

__all__ = [
    "Move",
    "parse_move",
    "apply_move_to_model",
    "apply_m1",
    "apply_m2",
    "apply_m3",
    "move_maps",
    "induced_matrix",
    "VerificationReport",
    "verify_isomorphism",
    "partial_matchings",
    "glue_pairs",
]


@dataclass(frozen=True)
class Move:
    kind: str  # "M1", "M2", "M3" or "ID"
    component: str = ""
    other: str = ""  # M1: the component added in
    sign: int = 1  # M1 orientation / M2 framing change
    insert: bool = True  # M3 direction
    pairing: tuple = ()  # M3: (name, value) pairs of the bounded surface
    name: str = ""  # name of the new component (defaults per kind)

    def __post_init__(self):
        if self.kind not in ("M1", "M2", "M3", "ID"):
            raise ValueError(f"unknown move kind {self.kind!r}")
        if self.kind in ("M1", "M2") and self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.kind == "M1" and self.component == self.other:
            raise ValueError("M1 needs two distinct components")

    @property
    def new_name(self):
        if self.name:
            return self.name
        if self.kind == "M1":
            return f"{self.component}#{self.other}" + ("" if self.sign > 0 else "bar")
        if self.kind == "M2":
            return f"{self.component}'"
        return self.component

    def inverse(self, source: ManifoldModel | None = None) -> Move:
        if self.kind == "M1":
            return Move("M1", self.new_name, self.other, -self.sign, name=self.component)
        if self.kind == "M2":
            return Move("M2", self.new_name, sign=-self.sign, name=self.component)
        if self.kind == "M3":
            return Move("M3", self.component, insert=not self.insert, pairing=self.pairing)
        return self


def parse_move(text: str) -> Move:
    """``m1:x:y:+1``, ``m2:x:+1``, ``m3:insert:b0[:x=1,y=0]``, ``m3:delete:b0``, ``id``."""
    parts = text.strip().split(":")
    kind = parts[0].upper()
    try:
        if kind == "ID":
            return Move("ID")
        if kind == "M1":
            return Move("M1", parts[1], parts[2], int(parts[3]) if len(parts) > 3 else 1)
        if kind == "M2":
            return Move("M2", parts[1], sign=int(parts[2]))
        if kind == "M3":
            direction = parts[1].lower()
            if direction not in ("insert", "delete"):
                raise ValueError(direction)
            pairing = ()
            if len(parts) > 3 and parts[3]:
                pairing = tuple(
                    (k.strip(), int(v)) for k, v in (kv.split("=") for kv in parts[3].split(","))
                )
            return Move("M3", parts[2], insert=direction == "insert", pairing=pairing)
    except (IndexError, ValueError) as e:
        raise ValueError(f"bad move {text!r}") from e
    raise ValueError(f"bad move {text!r}")


# ---------------------------------------------------------------------------
# models


def _m1_model(m: ManifoldModel, mv: Move) -> ManifoldModel:
    i, j, s = m.index(mv.component), m.index(mv.other), mv.sign
    ci, cj = m.components[i], m.components[j]
    free = tuple(a + s * b for a, b in zip(ci.class_free, cj.class_free))
    tors = tuple((a + s * b) % n for a, b, n in zip(ci.class_torsion, cj.class_torsion, m.torsion))
    comps = list(m.components)
    comps[i] = LinkComponent(mv.new_name, free, tors, ci.framing)

    def col(vec):
        v = list(vec)
        v[i] = vec[i] + s * vec[j]
        return tuple(v)

    h2 = tuple(H2Generator(h.name, col(h.pairing)) for h in m.h2)
    surfaces = []
    for surf in m.obr_surfaces:
        k = list(surf.kernel)
        k[j] = surf.kernel[j] - s * surf.kernel[i]
        surfaces.append(ObrSurface(tuple(k), col(surf.pairing)))
    return replace(m, components=tuple(comps), h2=h2, obr_surfaces=tuple(surfaces))


def _m2_model(m: ManifoldModel, mv: Move) -> ManifoldModel:
    i, e = m.index(mv.component), mv.sign
    comps = list(m.components)
    c = comps[i]
    comps[i] = LinkComponent(mv.new_name, c.class_free, c.class_torsion, c.framing + e)
    surfaces = []
    for surf in m.obr_surfaces:
        p = list(surf.pairing)
        p[i] += e * surf.kernel[i]
        surfaces.append(ObrSurface(surf.kernel, tuple(p)))
    return replace(m, components=tuple(comps), obr_surfaces=tuple(surfaces))


def _m3_insert(m: ManifoldModel, mv: Move) -> ManifoldModel:
    name = mv.component
    if name in m.alphabet:
        raise ModelError(f"component {name!r} already exists")
    q = dict(mv.pairing)
    if q.get(name, 0):
        raise ModelError("a zero-framed component has self-pairing 0")
    unknown = set(q) - set(m.alphabet) - {name}
    if unknown:
        raise ModelError(f"pairing mentions unknown component(s) {sorted(unknown)}")
    qv = tuple(q.get(n, 0) for n in m.alphabet)
    comps = m.components + (
        LinkComponent(name, (0,) * m.b1, (0,) * len(m.torsion), 0),
    )
    h2 = tuple(H2Generator(h.name, h.pairing + (0,)) for h in m.h2)
    surfaces = []
    for surf in m.obr_surfaces:
        # linking symmetry: the old surface meets b0 as often as b0's surface meets its boundary
        link = sum(a * b for a, b in zip(surf.kernel, qv))
        surfaces.append(ObrSurface(surf.kernel + (0,), surf.pairing + (link,)))
    surfaces.append(ObrSurface((0,) * len(m.components) + (1,), qv + (0,)))
    return replace(m, components=comps, h2=h2, obr_surfaces=tuple(surfaces))


def _m3_delete(m: ManifoldModel, mv: Move) -> ManifoldModel:
    k = m.index(mv.component)
    c = m.components[k]
    if any(c.class_free) or any(c.class_torsion):
        raise ModelError(f"M3 delete: {c.name} is not nullhomologous")
    if c.framing:
        raise ModelError(f"M3 delete: {c.name} is not zero-framed")
    keep = [i for i in range(len(m.components)) if i != k]
    unit = tuple(int(i == k) for i in range(len(m.components)))
    surfaces = []
    for surf in m.obr_surfaces:
        if surf.kernel == unit:
            continue
        kern = tuple(surf.kernel[i] for i in keep)
        if any(kern):
            surfaces.append(ObrSurface(kern, tuple(surf.pairing[i] for i in keep)))
    return replace(
        m,
        components=tuple(m.components[i] for i in keep),
        h2=tuple(H2Generator(h.name, tuple(h.pairing[i] for i in keep)) for h in m.h2),
        obr_surfaces=tuple(surfaces),
    )


def m3_pairing(m: ManifoldModel, mv: Move) -> dict:
    """Pairing vector of the surface bounded by the M3 component."""
    if mv.pairing:
        q = {n: 0 for n in m.alphabet}
        q.update(mv.pairing)
        return q
    if mv.component in m.alphabet:
        k = m.index(mv.component)
        unit = tuple(int(i == k) for i in range(len(m.components)))
        for surf in m.obr_surfaces:
            if surf.kernel == unit:
                return dict(zip(m.alphabet, surf.pairing))
    raise ModelError(f"M3: missing pairing vector for {mv.component!r}")


def apply_move_to_model(m: ManifoldModel, mv: Move) -> ManifoldModel:
    if mv.kind == "ID":
        return m
    if mv.kind == "M1":
        return _m1_model(m, mv)
    if mv.kind == "M2":
        return _m2_model(m, mv)
    if mv.insert:
        return _m3_insert(m, mv)
    return _m3_delete(m, mv)


# ---------------------------------------------------------------------------
# maps on diagram vectors


def _recolor(v: DiagramVector, color: str, label) -> DiagramVector:
    out = DiagramVector(v.degree)
    for cg, c in v.items():
        g = cg.graph()
        if color not in g.legs:
            out = out + DiagramVector(v.degree, {cg: c})
            continue
        legs = [label if l == color else l for l in g.legs]
        out = out + expand(ColoredGraph.build(g.degree, legs, g.edges), c)
    return out


def apply_m1(v: DiagramVector, i: str, j: str, sign: int, new: str, inverse=False) -> DiagramVector:
    """Forward: i-legs become (new - sign*j).  Inverse: new-legs become (i + sign*j)."""
    if inverse:
        return _recolor(v, new, LegLabel.of({i: 1, j: sign}))
    return _recolor(v, i, LegLabel.of({new: 1, j: -sign}))


def partial_matchings(items):
    """All sets of disjoint unordered pairs from ``items`` (including none)."""
    items = list(items)
    if len(items) < 2:
        yield ()
        return
    first, rest = items[0], items[1:]
    for m in partial_matchings(rest):
        yield m
    for t, other in enumerate(rest):
        for m in partial_matchings(rest[:t] + rest[t + 1:]):
            yield ((first, other),) + m


def glue_pairs(g: ColoredGraph, pairs) -> ColoredGraph:
    """Glue several disjoint pairs of legs at once."""
    n = g.degree
    partner = g.partner()
    gone = {l for p in pairs for l in p}
    keep = [l for l in range(len(g.legs)) if l not in gone]
    new_index = {3 * n + l: 3 * n + t for t, l in enumerate(keep)}
    edges = [(x, new_index[y]) for x, y in g.edges if y >= 3 * n and (y - 3 * n) not in gone]
    edges += [(x, y) for x, y in g.edges if y < 3 * n]
    edges += [(partner[3 * n + a], partner[3 * n + b]) for a, b in pairs]
    return ColoredGraph.build(n, [g.legs[l] for l in keep], edges)


def apply_m2(v: DiagramVector, i: str, eps: int, new: str, weight=None) -> DiagramVector:
    """Sum over partial matchings of the i-legs: glue matched pairs, weight eps^pairs.

    Unmatched i-legs are recolored ``new``.  ``weight(p)`` overrides the
    coefficient of a term with p glued pairs.
    """
    if weight is None:
        weight = lambda p: eps ** p
    if i == new:
        raise GraphError("M2 needs a fresh name for the reframed component")
    # the leftmost i-leg is either left alone or glued to one later i-leg;
    # merging canonical forms between steps keeps the work polynomial
    work = {(cg, 0): c for cg, c in v.items()}
    done = {}
    while work:
        step = {}
        for (cg, p), c in work.items():
            g = cg.graph()
            if i not in g.legs:
                done[(cg, p)] = done.get((cg, p), 0) + c
                continue
            l0 = g.legs.index(i)
            legs = list(g.legs)
            legs[l0] = new
            out = [(ColoredGraph.build(g.degree, legs, g.edges), p, c)]
            out += [(glue_pairs(g, ((l0, l),)), p + 1, c)
                    for l in range(l0 + 1, len(legs)) if g.legs[l] == i]
            for h, q, x in out:
                key, sign = canonicalize(h)
                step[(key, q)] = step.get((key, q), 0) + sign * x
        work = {k: c for k, c in step.items() if c and not (k[0].degenerate and c % 2 == 0)}
    return accumulate_canonical(v.degree, [(cg, c * weight(p)) for (cg, p), c in done.items()])


def accumulate_canonical(degree, pairs) -> DiagramVector:
    out = {}
    for cg, c in pairs:
        out[cg] = out.get(cg, 0) + c
    return DiagramVector(degree, out)


def apply_m3(v: DiagramVector, component: str, pairing: dict, insert: bool) -> DiagramVector:
    """Insert: identity.  Delete: eliminate component-colored legs leftmost first.

    One elimination step is G -> -sum_l pairing[c_l] G_l, gluing the
    leftmost component-colored leg to each other leg; the self-pairing is 0.
    """
    if insert:
        return v
    weights = dict(pairing)
    weights[component] = 0
    out = {}
    work = list(v.items())
    while work:
        nxt = []
        for cg, c in work:
            g = cg.graph()
            if component not in g.legs:
                out[cg] = out.get(cg, 0) + c
                continue
            l0 = g.legs.index(component)
            for l, col in enumerate(g.legs):
                w = weights.get(col)
                if w is None:
                    raise GraphError(f"no pairing value for color {col!r}")
                if l != l0 and w:
                    nxt.append((glue_pairs(g, ((l0, l),)), -c * w))
        work = list(accumulate(v.degree, nxt).items()) if nxt else []
    return DiagramVector(v.degree, out)


def move_maps(mv: Move, source: ManifoldModel):
    """``(forward, inverse)`` maps between source and target diagram vectors."""
    if mv.kind == "ID":
        return (lambda v: v), (lambda v: v)
    if mv.kind == "M1":
        i, j, s, new = mv.component, mv.other, mv.sign, mv.new_name
        return (
            lambda v: apply_m1(v, i, j, s, new),
            lambda v: apply_m1(v, i, j, s, new, inverse=True),
        )
    if mv.kind == "M2":
        i, e, new = mv.component, mv.sign, mv.new_name
        return (lambda v: apply_m2(v, i, e, new), lambda v: apply_m2(v, new, -e, i))
    if mv.insert:
        target = apply_move_to_model(source, mv)
        q = m3_pairing(target, mv)
        return (lambda v: v), (lambda v: apply_m3(v, mv.component, q, insert=False))
    q = m3_pairing(source, mv)
    return (lambda v: apply_m3(v, mv.component, q, insert=False)), (lambda v: v)


# ---------------------------------------------------------------------------
# verification


def linear_cached(fn):
    """Extend ``fn`` linearly from its values on single generators, memoized."""
    cache = {}

    def apply(v: DiagramVector) -> DiagramVector:
        pairs = []
        for cg, c in v.items():
            img = cache.get(cg)
            if img is None:
                img = cache[cg] = fn(DiagramVector(v.degree, {cg: 1}))
            pairs.extend((k, c * x) for k, x in img.items())
        return accumulate_canonical(v.degree, pairs)

    return apply


def _quotient(model, degree, ring, group, degree_limit):
    basis, rels = relation_system(model, degree, group, degree_limit=degree_limit)
    return basis, rels, present_quotient(basis, rels, ring)


def induced_matrix(mv: Move, degree: int, source: ManifoldModel, target=None, ring="Z",
                   group="Ao", degree_limit=4, forward=None):
    """Matrix of the move map in quotient coordinates (columns: source coordinates)."""
    target = target or apply_move_to_model(source, mv)
    fwd = forward or move_maps(mv, source)[0]
    _, _, qs = _quotient(source, degree, ring, group, degree_limit)
    _, _, qt = _quotient(target, degree, ring, group, degree_limit)
    cols = [qt.coordinates(fwd(rep)) for rep in qs.basis_representatives]
    nrows = qt.free_rank + len(qt.torsion)
    if ring.upper() == "Q":
        return [[cols[c][r] for c in range(len(cols))] for r in range(nrows)]
    return IntegerMatrix(
        nrows, len(cols), {(r, c): cols[c][r] for c in range(len(cols)) for r in range(nrows) if cols[c][r]}
    )


@dataclass
class VerificationReport:
    move: Move
    degree: int
    ring: str
    checks: dict = field(default_factory=dict)  # name -> (passed, detail)
    witnesses: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(ok for ok, _ in self.checks.values())

    def lines(self):
        yield f"move={self.move.kind} component={self.move.component} degree={self.degree} ring={self.ring}"
        for name, (ok, detail) in self.checks.items():
            yield f"check={name} status={'pass' if ok else 'fail'} detail={detail}"
            for w in self.witnesses.get(name, [])[:5]:
                yield f"  witness {w}"
        yield f"result={'pass' if self.passed else 'fail'}"

    def __str__(self):
        return "\n".join(self.lines())


def verify_isomorphism(mv: Move, degree: int, source: ManifoldModel, ring="Z", group="Ao",
                       degree_limit=4, maps=None) -> VerificationReport:
    """(a) relations go to relations, (b) the maps are mutually inverse on the
    quotients (and inverse-after-forward exactly on generators), (c) free rank
    and torsion agree."""
    target = apply_move_to_model(source, mv)
    fwd, inv = (linear_cached(f) for f in (maps or move_maps(mv, source)))
    bs, rs, qs = _quotient(source, degree, ring, group, degree_limit)
    bt, rt, qt = _quotient(target, degree, ring, group, degree_limit)
    report = VerificationReport(mv, degree, ring.upper())

    def run(name, vectors, fn, q):
        bad = []
        for v in vectors:
            try:
                if not q.is_zero(fn(v)):
                    bad.append(str(v))
            except GraphError as e:
                bad.append(f"{v}: {e}")
        report.checks[name] = (not bad, f"{len(vectors) - len(bad)}/{len(vectors)}")
        report.witnesses[name] = bad

    gens_s = [DiagramVector(degree, {cg: 1}) for cg in qs.columns]
    gens_t = [DiagramVector(degree, {cg: 1}) for cg in qt.columns]
    if ring.upper() == "Z":
        rs = rs + [DiagramVector(degree, {cg: 1}) * 2 for cg in bs.degenerates]
        rt = rt + [DiagramVector(degree, {cg: 1}) * 2 for cg in bt.degenerates]
    run("relations_forward", rs, fwd, qt)
    run("relations_inverse", rt, inv, qs)
    run("inverse_after_forward", gens_s, lambda v: inv(fwd(v)) - v, qs)
    # the source-side round trip is exact before quotienting, except for an
    # M3 deletion, which eliminates legs and only inverts modulo relations
    if not (mv.kind == "M3" and not mv.insert):
        raw_bad = [str(v) for v in gens_s if inv(fwd(v)) != v]
        report.checks["inverse_after_forward_raw"] = (not raw_bad, f"{len(gens_s) - len(raw_bad)}/{len(gens_s)}")
        report.witnesses["inverse_after_forward_raw"] = raw_bad
    run("forward_after_inverse", gens_t, lambda v: fwd(inv(v)) - v, qt)
    same = (qs.free_rank, qs.torsion) == (qt.free_rank, qt.torsion)
    report.checks["invariants"] = (same, f"source={qs.summary()} target={qt.summary()}")
    return report
