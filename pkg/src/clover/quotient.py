"""
Graded quotients of the graph groups.

``present_quotient`` turns a generator basis and relation vectors into the
invariants of the cokernel (free rank, torsion) together with a reduction
map to normal-form coordinates.  ``group_quotient`` assembles the tower
B(b) -> A(b) -> A°(b) and the legless A(phi) for one degree.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .enumeration import DEFAULT_DEGREE_LIMIT, GeneratorBasis, enumerate_basis
from .graphs import DiagramVector, GraphError
from .homology import ManifoldModel
from .linalg import IntegerLattice, IntegerMatrix, RationalSpan, smith_normal_form
from .relations import RelationSet, br_relations, ihx_relations, loop_relations, obr_relations

__all__ = [
    "GROUPS",
    "GradedQuotient",
    "present_quotient",
    "reduce_to_normal_form",
    "relation_system",
    "group_quotient",
]

GROUPS = ("B", "A", "Ao", "Aphi")
_GROUP_RELATIONS = {
    "B": "as,ihx,loop",
    "A": "as,ihx,loop,br",
    "Ao": "as,ihx,loop,br,obr",
    "Aphi": "as,ihx,loop",
}


@dataclass
class GradedQuotient:
    degree: int
    ring: str
    free_rank: int
    torsion: tuple
    basis_representatives: list  # DiagramVector per coordinate (free first, then torsion)
    generator_count: int
    relation_count: int
    columns: list = field(repr=False)
    _space: object = field(repr=False)
    _snf: dict = field(repr=False, default=None)

    def _vector(self, v: DiagramVector) -> dict:
        if v and v.degree != self.degree:
            raise GraphError(f"degree {v.degree} vector reduced in a degree-{self.degree} quotient")
        index = self._index
        out = {}
        for cg, c in v.items():
            if cg.degenerate and self.ring == "Q":
                continue
            j = index.get(cg)
            if j is None:
                raise GraphError(f"graph outside the generator basis: {cg}")
            out[j] = c
        return out

    @property
    def _index(self):
        idx = getattr(self, "_index_cache", None)
        if idx is None:
            idx = {cg: j for j, cg in enumerate(self.columns)}
            self._index_cache = idx
        return idx

    def coordinates(self, v: DiagramVector) -> tuple:
        """Coordinates of the image of v: free part, then torsion residues."""
        r = self._space.reduce(self._vector(v))
        if self.ring == "Q":
            return tuple(r.get(j, Fraction(0)) for j in self._snf["free_cols"])
        s = self._snf
        w = [0] * len(s["cols"])
        for a, j in enumerate(s["cols"]):
            x = r.get(j, 0)
            if x:
                for b, vv in s["V"][a].items():
                    w[b] += x * vv
        free = [w[b] for b in range(s["nrows"], len(s["cols"]))]
        free += [r.get(j, 0) for j in s["pure_free"]]
        tors = [w[b] % d for b, d in s["torsion_slots"]]
        return tuple(free) + tuple(tors)

    def is_zero(self, v: DiagramVector) -> bool:
        return not any(self.coordinates(v))

    def summary(self) -> str:
        tors = " + ".join(f"Z/{d}" for d in self.torsion)
        parts = ([f"Z^{self.free_rank}"] if self.free_rank else []) + ([tors] if tors else [])
        return " + ".join(parts) or "0"


def _rows_from(vectors, index, drop_degenerate):
    rows = []
    for v in vectors:
        row = {}
        for cg, c in v.items():
            if drop_degenerate and cg.degenerate:
                continue
            j = index.get(cg)
            if j is None:
                raise GraphError(f"relation term outside the generator basis: {cg}")
            row[j] = c
        if row:
            rows.append(row)
    return rows


def present_quotient(basis: GeneratorBasis, relations, ring: str = "Q") -> GradedQuotient:
    """Cokernel of the relation matrix on the basis generators.

    Over Z the degenerate generators are kept and the rows 2G = 0 added;
    over Q they are dropped.
    """
    ring = ring.upper()
    if ring not in ("Q", "Z"):
        raise ValueError("ring must be 'Q' or 'Z'")
    relations = list(relations)
    for v in relations:
        if v and v.degree != basis.degree:
            raise GraphError("inhomogeneous relation vector")
    if ring == "Q":
        columns = list(basis.generators)
        index = {cg: j for j, cg in enumerate(columns)}
        span = RationalSpan()
        for row in _rows_from(relations, index, True):
            span.add(row)
        free_cols = [j for j in range(len(columns)) if j not in span.rows]
        reps = [DiagramVector(basis.degree, {columns[j]: 1}) for j in free_cols]
        return GradedQuotient(
            basis.degree, "Q", len(free_cols), (), reps, len(columns), len(relations),
            columns, span, {"free_cols": free_cols},
        )

    columns = list(basis.all)
    index = {cg: j for j, cg in enumerate(columns)}
    lat = IntegerLattice()
    rows = _rows_from(relations, index, False)
    rows += [{index[cg]: 2} for cg in basis.degenerates]
    for row in rows:
        lat.add(row)
    lat.hermite()
    nonunit = sorted(c for c, r in lat.rows.items() if r[c] != 1)
    block_cols = sorted({j for c in nonunit for j in lat.rows[c]})
    in_block = set(block_cols)
    pure_free = [j for j in range(len(columns)) if j not in lat.rows and j not in in_block]
    dense = [[lat.rows[c].get(j, 0) for j in block_cols] for c in nonunit]
    if nonunit:
        _, d, v, vinv = smith_normal_form(dense, with_inverse=True)
        diag = d.diagonal()
        vd, vid = v.to_dense(), vinv.to_dense()
    else:
        diag, vd, vid = [], [], []
    nrows = len(nonunit)
    V = [{b: x for b, x in enumerate(vd[a]) if x} for a in range(len(block_cols))]
    torsion_slots = [(b, diag[b]) for b in range(nrows) if diag[b] > 1]

    def block_vector(b):
        return DiagramVector(basis.degree, {columns[block_cols[a]]: x for a, x in enumerate(vid[b]) if x})

    reps = [block_vector(b) for b in range(nrows, len(block_cols))]
    reps += [DiagramVector(basis.degree, {columns[j]: 1}) for j in pure_free]
    reps += [block_vector(b) for b, _ in torsion_slots]
    free_rank = len(block_cols) - nrows + len(pure_free)
    snf = {
        "cols": block_cols,
        "nrows": nrows,
        "V": V,
        "pure_free": pure_free,
        "torsion_slots": torsion_slots,
    }
    return GradedQuotient(
        basis.degree, "Z", free_rank, tuple(d for _, d in torsion_slots), reps,
        len(columns), len(rows), columns, lat, snf,
    )


def reduce_to_normal_form(v: DiagramVector, q: GradedQuotient) -> tuple:
    return q.coordinates(v)


def _legs_filter(legs, shift):
    if legs is None:
        return None
    return {k + s for k in legs for s in shift}


def relation_system(
    model: ManifoldModel | None,
    degree: int,
    group: str = "Ao",
    *,
    selection: RelationSet | None = None,
    legs=None,
    connected_only: bool = False,
    degree_limit: int | None = DEFAULT_DEGREE_LIMIT,
):
    """Generator basis and relation vectors for one group in one degree.

    ``legs`` restricts the generators to the given leg counts; relations
    touching other generators are dropped, so the result is a quotient of a
    subsystem.  It is exact whenever the relations in use preserve the leg
    count (everything except OBR).
    """
    if group not in GROUPS:
        raise ValueError(f"group must be one of {GROUPS}")
    if selection is None:
        selection = RelationSet.parse(_GROUP_RELATIONS[group])
    alphabet = () if group == "Aphi" or model is None else model.alphabet
    basis = enumerate_basis(
        degree, alphabet, legs=legs, connected_only=connected_only, degree_limit=degree_limit
    )
    rels = []
    if "ihx" in selection:
        rels += ihx_relations(basis)
    if "loop" in selection:
        rels += loop_relations(basis)
    need_star = group != "Aphi" and model is not None and (
        ("br" in selection and model.h2) or ("obr" in selection and model.obr_surfaces)
    )
    if need_star:
        star_basis = enumerate_basis(
            degree, alphabet, star=True, legs=_legs_filter(legs, (0, 2)),
            connected_only=connected_only, degree_limit=degree_limit,
        )
        if "br" in selection:
            rels += br_relations(star_basis, model)
        if "obr" in selection:
            rels += obr_relations(star_basis, model)
    if legs is not None or connected_only:
        keep = set(basis.all)
        rels = [r for r in rels if all(cg in keep for cg in r)]
    return basis, rels


def group_quotient(model, degree, group="Ao", ring="Q", **kw) -> GradedQuotient:
    t0 = time.perf_counter()
    basis, rels = relation_system(model, degree, group, **kw)
    q = present_quotient(basis, rels, ring)
    q.wall_clock = time.perf_counter() - t0
    return q
