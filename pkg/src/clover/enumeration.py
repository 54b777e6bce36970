"""
Enumeration of isomorphism classes of colored uni-trivalent graphs.

Connected uncolored shapes are grown one vertex at a time (every connected
graph has a vertex whose removal keeps it connected), legs are colored up to
isomorphism, and disconnected graphs are assembled as multisets of connected
components.  Results are sorted by canonical key so matrix layouts are
reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, product

from .graphs import STAR, CanonicalGraph, ColoredGraph, canonicalize, graph_from_key

__all__ = [
    "DEFAULT_DEGREE_LIMIT",
    "ResourceLimitError",
    "GeneratorBasis",
    "enumerate_basis",
    "connected_shapes",
    "connected_colored",
]

DEFAULT_DEGREE_LIMIT = 4
_BLANK = "."


class ResourceLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class GeneratorBasis:
    degree: int
    alphabet: tuple
    generators: tuple  # non-degenerate CanonicalGraphs, sorted
    degenerates: tuple  # degenerate CanonicalGraphs, sorted

    @property
    def all(self):
        return tuple(sorted(self.generators + self.degenerates))

    def __len__(self):
        return len(self.generators) + len(self.degenerates)


def _grow(g: ColoredGraph):
    """All shapes obtained by attaching one new vertex to free slots of g."""
    n, k = g.degree, len(g.legs)
    partner = g.partner()
    attach = [partner[3 * n + j] for j in range(k)]
    for m in (1, 2, 3):
        for chosen in combinations(range(k), m):
            rest = [j for j in range(k) if j not in chosen]
            # renumber: old vertex slots keep their half-edge ids
            base = [(a, b) for a, b in g.edges if b < 3 * n]
            new = 3 * n
            edges = list(base)
            for t, j in enumerate(chosen):
                edges.append((attach[j], new + t))
            tails = []
            if m == 1:
                # either a loop or two legs on the two remaining slots
                variants = [[(new + 1, new + 2)], None]
            else:
                variants = [None]
            for extra in variants:
                e2 = list(edges)
                leg_slots = [attach[j] for j in rest]
                if extra:
                    e2.extend(extra)
                else:
                    leg_slots += [new + t for t in range(m, 3)]
                nn = n + 1
                legs = [_BLANK] * len(leg_slots)
                for jj, h in enumerate(leg_slots):
                    e2.append((h, 3 * nn + jj))
                tails.append(ColoredGraph.build(nn, legs, e2))
            yield from tails


@lru_cache(maxsize=None)
def connected_shapes(degree: int) -> tuple:
    """Connected uncolored graphs with ``degree`` trivalent vertices (as keys)."""
    if degree <= 0:
        return ()
    if degree == 1:
        y = ColoredGraph.build(1, [_BLANK] * 3, [(0, 3), (1, 4), (2, 5)])
        lolly = ColoredGraph.build(1, [_BLANK], [(0, 1), (2, 3)])
        return tuple(sorted({canonicalize(y)[0].key, canonicalize(lolly)[0].key}))
    out = set()
    for key in connected_shapes(degree - 1):
        for h in _grow(graph_from_key(key)):
            out.add(canonicalize(h)[0].key)
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def connected_colored(degree: int, alphabet: tuple, stars: int = 0) -> tuple:
    """Connected graphs of one degree with legs colored from ``alphabet``.

    ``stars`` is the exact number of legs colored :data:`STAR` (0 or 1).
    """
    out = set()
    for key in connected_shapes(degree):
        shape = graph_from_key(key)
        k = len(shape.legs)
        if k < stars:
            continue
        for star_pos in combinations(range(k), stars):
            others = [j for j in range(k) if j not in star_pos]
            for word in product(alphabet, repeat=len(others)):
                legs = [STAR] * k
                for j, c in zip(others, word):
                    legs[j] = c
                out.add(canonicalize(ColoredGraph(degree, tuple(legs), shape.edges))[0])
    return tuple(sorted(out))


def _union(comps) -> CanonicalGraph:
    key = tuple(sorted(c for cg in comps for c in cg.key))
    return CanonicalGraph(key, any(cg.degenerate for cg in comps))


def _partitions(n, max_part):
    if n == 0:
        yield ()
        return
    for p in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - p, p):
            yield (p,) + rest


def enumerate_basis(
    degree: int,
    alphabet=(),
    *,
    connected_only: bool = False,
    star: bool = False,
    legs=None,
    degree_limit: int | None = DEFAULT_DEGREE_LIMIT,
) -> GeneratorBasis:
    """All isomorphism classes of degree-``degree`` graphs over ``alphabet``.

    With ``star=True`` exactly one leg is colored by the reserved symbol ``*``.
    ``legs`` optionally restricts the allowed leg counts (an iterable of ints).
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if degree_limit is not None and degree > degree_limit:
        raise ResourceLimitError(
            f"degree {degree} exceeds the limit {degree_limit}; raise it explicitly"
        )
    alphabet = tuple(alphabet)
    if STAR in alphabet:
        raise ValueError("the star symbol is reserved")
    if len(set(alphabet)) != len(alphabet):
        raise ValueError("alphabet names must be distinct")
    allowed = None if legs is None else frozenset(legs)

    found = []
    if degree == 0:
        if not star:
            found.append(CanonicalGraph((), False))
    else:
        parts = [(degree,)] if connected_only else list(_partitions(degree, degree))
        for part in parts:
            found.extend(_assemble(part, alphabet, star))
    if allowed is not None:
        found = [cg for cg in found if len(cg.legs) in allowed]
    found = sorted(set(found))
    return GeneratorBasis(
        degree,
        alphabet,
        tuple(cg for cg in found if not cg.degenerate),
        tuple(cg for cg in found if cg.degenerate),
    )


def _assemble(part, alphabet, star):
    """Multisets of connected components with the given degree partition."""
    # group equal parts so components of equal degree are chosen as multisets
    groups = {}
    for p in part:
        groups[p] = groups.get(p, 0) + 1
    degrees = sorted(groups)

    def plain_choices(p, count):
        return combinations_with_replacement(connected_colored(p, alphabet, 0), count)

    if not star:
        pools = [list(plain_choices(p, groups[p])) for p in degrees]
        for pick in product(*pools):
            yield _union([cg for grp in pick for cg in grp])
        return
    # exactly one component carries the star
    for sp in degrees:
        starred = connected_colored(sp, alphabet, 1)
        pools = []
        for p in degrees:
            cnt = groups[p] - (1 if p == sp else 0)
            pools.append(list(plain_choices(p, cnt)))
        for s in starred:
            for pick in product(*pools):
                yield _union([s] + [cg for grp in pick for cg in grp])
