"""
Colored uni-trivalent graphs.

A graph of degree ``n`` has ``3n`` vertex half-edges (slot ``s`` of vertex
``k`` is half-edge ``3k + s``, slot order being the counterclockwise cyclic
order) and one half-edge per leg (leg ``j`` is half-edge ``3n + j``).  The
edges form a perfect matching on all half-edges; no edge may join two legs.

Reversing the cyclic order at a vertex negates the graph (AS).  Canonical
forms absorb that sign: :func:`canonicalize` returns a canonical key together
with the sign relating the input to the canonical representative.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

__all__ = [
    "STAR",
    "LegLabel",
    "ColoredGraph",
    "CanonicalGraph",
    "DiagramVector",
    "GraphError",
    "canonicalize",
    "graph_from_key",
    "expand",
    "glue_legs",
    "parse_graph",
    "format_graph",
    "format_label",
    "parse_label",
]

STAR = "*"

_NAME = r"(?:\*|[A-Za-z_][A-Za-z0-9_#']*)"
_NAME_RE = re.compile(_NAME + r"\Z")


class GraphError(ValueError):
    pass


# ---------------------------------------------------------------------------
# leg labels


@dataclass(frozen=True, order=True)
class LegLabel:
    """A nonzero formal integer combination of colors."""

    terms: tuple  # sorted ((color, coefficient), ...), no zero coefficients

    def __post_init__(self):
        if not self.terms:
            raise GraphError("leg label must be a nonzero combination")
        for name, c in self.terms:
            if c == 0:
                raise GraphError("leg label stores a zero coefficient")

    @classmethod
    def of(cls, combination) -> LegLabel:
        if isinstance(combination, LegLabel):
            return combination
        if isinstance(combination, str):
            return cls(((combination, 1),))
        acc = {}
        for name, c in dict(combination).items():
            acc[name] = acc.get(name, 0) + c
        return cls(tuple(sorted((n, c) for n, c in acc.items() if c)))

    @property
    def single(self) -> str | None:
        if len(self.terms) == 1 and self.terms[0][1] == 1:
            return self.terms[0][0]
        return None

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __str__(self):
        return format_label(self)


def _label_terms(label):
    if isinstance(label, str):
        return ((label, 1),)
    return label.terms


def format_label(label) -> str:
    if isinstance(label, str):
        return label
    out = []
    for i, (name, c) in enumerate(label.terms):
        sign = "-" if c < 0 else ("+" if i else "")
        mag = "" if abs(c) == 1 else str(abs(c))
        out.append(f"{sign}{mag}{name}")
    return "".join(out)


_TERM_RE = re.compile(r"([+-]?)(\d*)(" + _NAME + r")")


def parse_label(text: str):
    """Parse ``x``, ``x+2y``, ``-x+y``...; single colors come back as ``str``."""
    text = text.strip()
    pos, acc = 0, {}
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or (pos > 0 and not m.group(1)):
            raise GraphError(f"bad leg label {text!r} at column {pos + 1}")
        c = int(m.group(2)) if m.group(2) else 1
        if m.group(1) == "-":
            c = -c
        acc[m.group(3)] = acc.get(m.group(3), 0) + c
        pos = m.end()
    lab = LegLabel.of(acc)
    return lab.single or lab


# ---------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class ColoredGraph:
    degree: int
    legs: tuple
    edges: tuple  # sorted pairs (a, b) with a < b

    def __post_init__(self):
        n, k = self.degree, len(self.legs)
        if n < 0:
            raise GraphError("negative degree")
        total = 3 * n + k
        seen = [False] * total
        for a, b in self.edges:
            if not (0 <= a < b < total):
                raise GraphError(f"bad edge ({a}, {b})")
            if a >= 3 * n:
                raise GraphError("edge joins two legs (strut)")
            if seen[a] or seen[b]:
                raise GraphError("half-edge used twice")
            seen[a] = seen[b] = True
        if not all(seen):
            raise GraphError("edges do not form a perfect matching")
        for lab in self.legs:
            if not isinstance(lab, (str, LegLabel)):
                raise GraphError(f"bad leg label {lab!r}")

    @classmethod
    def build(cls, degree, legs, edges) -> ColoredGraph:
        legs = tuple(l if isinstance(l, (str, LegLabel)) else LegLabel.of(l) for l in legs)
        legs = tuple(l.single or l if isinstance(l, LegLabel) else l for l in legs)
        edges = tuple(sorted((min(a, b), max(a, b)) for a, b in edges))
        return cls(degree, legs, edges)

    @property
    def n_half_edges(self):
        return 3 * self.degree + len(self.legs)

    def leg_half_edge(self, j):
        return 3 * self.degree + j

    def partner(self) -> list:
        p = [0] * self.n_half_edges
        for a, b in self.edges:
            p[a] = b
            p[b] = a
        return p

    def internal_edges(self):
        """Edges between two distinct trivalent vertices."""
        v = 3 * self.degree
        return [(a, b) for a, b in self.edges if b < v and a // 3 != b // 3]

    def has_loop(self) -> bool:
        v = 3 * self.degree
        return any(b < v and a // 3 == b // 3 for a, b in self.edges)

    def is_single_colored(self) -> bool:
        return all(isinstance(l, str) for l in self.legs)

    def with_legs(self, legs) -> ColoredGraph:
        return ColoredGraph.build(self.degree, legs, self.edges)

    def __str__(self):
        return format_graph(self)


def format_half_edge(h, degree):
    if h < 3 * degree:
        return f"v{h // 3}.{h % 3}"
    return f"l{h - 3 * degree}"


def format_graph(g: ColoredGraph) -> str:
    legs = ",".join(format_label(l) for l in g.legs)
    edges = ", ".join(
        f"{format_half_edge(a, g.degree)}-{format_half_edge(b, g.degree)}" for a, b in g.edges
    )
    return f"deg={g.degree}; legs=[{legs}]; edges=[{edges}]"


_GRAPH_RE = re.compile(
    r"\s*deg\s*=\s*(\d+)\s*;\s*legs\s*=\s*\[(.*?)\]\s*;\s*edges\s*=\s*\[(.*?)\]\s*\Z", re.S
)
_HALF_RE = re.compile(r"\s*(?:v(\d+)\.([012])|l(\d+))\s*\Z")


def parse_graph(text: str) -> ColoredGraph:
    m = _GRAPH_RE.match(text)
    if not m:
        raise GraphError(f"cannot parse graph notation: {text!r}")
    degree = int(m.group(1))
    legs = [parse_label(s) for s in m.group(2).split(",")] if m.group(2).strip() else []

    def half(s):
        hm = _HALF_RE.match(s)
        if not hm:
            raise GraphError(f"bad half-edge {s!r}")
        if hm.group(3) is not None:
            j = int(hm.group(3))
            if j >= len(legs):
                raise GraphError(f"leg index out of range in {s!r}")
            return 3 * degree + j
        k = int(hm.group(1))
        if k >= degree:
            raise GraphError(f"vertex index out of range in {s!r}")
        return 3 * k + int(hm.group(2))

    edges = []
    if m.group(3).strip():
        for tok in m.group(3).split(","):
            parts = tok.split("-")
            if len(parts) != 2:
                raise GraphError(f"bad edge {tok!r}")
            edges.append((half(parts[0]), half(parts[1])))
    return ColoredGraph.build(degree, legs, edges)


# ---------------------------------------------------------------------------
# canonical forms
#
# A component code lists, for each vertex in canonical order, the sorted
# descriptors of its three ends: (0, color) for a leg, (1, j) for an edge to
# canonical vertex j (a loop contributes (1, i) twice).  The multigraph with
# colored legs is determined by the code; cyclic orders only contribute a sign.


@dataclass(frozen=True, order=True)
class CanonicalGraph:
    key: tuple
    degenerate: bool = field(default=False, compare=False)

    @property
    def degree(self) -> int:
        return sum(len(c) for c in self.key)

    @property
    def legs(self) -> tuple:
        return tuple(d[1] for c in self.key for ends in c for d in ends if d[0] == 0)

    def graph(self) -> ColoredGraph:
        return graph_from_key(self.key)

    def __str__(self):
        return format_graph(self.graph())


def _components(g: ColoredGraph, partner):
    n = g.degree
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in g.edges:
        if b < 3 * n:
            ra, rb = find(a // 3), find(b // 3)
            if ra != rb:
                parent[ra] = rb
    comps = {}
    for v in range(n):
        comps.setdefault(find(v), []).append(v)
    return list(comps.values())


def _refine(verts, colors, nbrs):
    """Equitable refinement; colors are small ints, returned re-ranked."""
    ncls = len(set(colors[v] for v in verts))
    while True:
        sig = {}
        for v in verts:
            cnt = {}
            for w in nbrs[v]:
                cnt[colors[w]] = cnt.get(colors[w], 0) + 1
            sig[v] = (colors[v], tuple(sorted(cnt.items())))
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = dict(colors)
        for v in verts:
            new[v] = ranks[sig[v]]
        if len(ranks) == ncls:
            return new
        colors, ncls = new, len(ranks)


def _component_code(verts, ends, order):
    rank = {v: i for i, v in enumerate(order)}
    code = []
    for v in order:
        code.append(
            tuple(sorted((0, e[1]) if e[0] == 0 else (1, rank[e[1]]) for e in ends[v]))
        )
    return tuple(code)


def _perm_parity(p):
    # p: list image of 0..2
    inv = sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j])
    return -1 if inv % 2 else 1


def _mapping_sign(order, ends, partner, code):
    """Sign of the half-edge isomorphism from g onto the canonical layout."""
    rank = {v: i for i, v in enumerate(order)}
    assigned = {}  # g half-edge -> canonical slot index at its vertex
    sign = 1
    for i, v in enumerate(order):
        desc = [(0, e[1]) if e[0] == 0 else (1, rank[e[1]]) for e in ends[v]]
        canon = code[i]
        used = [False] * 3
        # slots already fixed from an earlier vertex come first
        for s in range(3):
            h = 3 * v + s
            if h in assigned:
                used[assigned[h]] = True
        for s in range(3):
            h = 3 * v + s
            if h in assigned:
                continue
            d = desc[s]
            t = next(t for t in range(3) if not used[t] and canon[t] == d)
            used[t] = True
            assigned[h] = t
            if d[0] == 1 and d[1] > i:
                # partner gets the matching occurrence on the other side
                w = order[d[1]]
                occ = sum(1 for u in range(t) if canon[u] == d)
                back = (1, i)
                ct = code[d[1]]
                taken = [u for u in range(3) if ct[u] == back]
                assigned[partner[h]] = taken[occ]
            elif d[0] == 1 and d[1] == i:
                # loop: the pair occupies the two equal canonical slots
                q = partner[h]
                t2 = next(u for u in range(3) if not used[u] and canon[u] == d)
                used[t2] = True
                assigned[q] = t2
        sign *= _perm_parity([assigned[3 * v + s] for s in range(3)])
    return sign


def _canonical_component(verts, ends, partner):
    nbrs = {v: [e[1] for e in ends[v] if e[0] == 1 and e[1] != v] for v in verts}
    init = {}
    for v in verts:
        legs = tuple(sorted(e[1] for e in ends[v] if e[0] == 0))
        loops = sum(1 for e in ends[v] if e[0] == 1 and e[1] == v)
        init[v] = (len(legs), legs, loops)
    ranks = {s: i for i, s in enumerate(sorted(set(init.values())))}
    colors = _refine(verts, {v: ranks[init[v]] for v in verts}, nbrs)

    best = None
    best_orders = []

    def search(colors):
        nonlocal best, best_orders
        cells = {}
        for v in verts:
            cells.setdefault(colors[v], []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            order = sorted(verts, key=colors.__getitem__)
            code = _component_code(verts, ends, order)
            if best is None or code < best:
                best, best_orders = code, [order]
            elif code == best:
                best_orders.append(order)
            return
        for v in target:
            indiv = {w: 2 * colors[w] + (0 if w == v else 1) for w in verts}
            search(_refine(verts, indiv, nbrs))

    search(colors)
    signs = {_mapping_sign(o, ends, partner, best) for o in best_orders}
    local_odd = any(
        any(e[0] == 1 and e[1] == v for e in ends[v])
        or len({e[1] for e in ends[v] if e[0] == 0}) < sum(1 for e in ends[v] if e[0] == 0)
        for v in verts
    )
    degenerate = local_odd or len(signs) > 1
    return best, degenerate, (1 if degenerate else signs.pop())


@lru_cache(maxsize=1 << 18)
def _canonicalize_cached(g: ColoredGraph):
    n = g.degree
    partner = g.partner()
    ends = {}
    for v in range(n):
        row = []
        for s in range(3):
            p = partner[3 * v + s]
            row.append((0, g.legs[p - 3 * n]) if p >= 3 * n else (1, p // 3))
        ends[v] = row
    codes, degenerate, sign = [], False, 1
    for verts in _components(g, partner):
        code, deg, s = _canonical_component(verts, ends, partner)
        codes.append(code)
        degenerate |= deg
        sign *= s
    key = tuple(sorted(codes))
    if degenerate:
        sign = 1
    return CanonicalGraph(key, degenerate), sign


def canonicalize(g: ColoredGraph):
    """Return ``(CanonicalGraph, sign)`` with ``g == sign * canonical`` under AS.

    Degenerate graphs (an automorphism reverses an odd number of cyclic
    orders) get sign +1; they are 2-torsion and their coefficients only
    matter mod 2.
    """
    if not g.is_single_colored():
        raise GraphError("canonicalize needs single-color legs; expand first")
    return _canonicalize_cached(g)


@lru_cache(maxsize=1 << 16)
def graph_from_key(key) -> ColoredGraph:
    """The canonical representative: canonicalizes to ``key`` with sign +1."""
    legs, edges = [], []
    offset = 0
    n = sum(len(c) for c in key)
    leg_slots = []
    for code in key:
        for i, canon in enumerate(code):
            for t, d in enumerate(canon):
                h = 3 * (offset + i) + t
                if d[0] == 0:
                    leg_slots.append((h, d[1]))
                elif d[1] > i:
                    occ = sum(1 for u in range(t) if canon[u] == d)
                    taken = [u for u in range(3) if code[d[1]][u] == (1, i)]
                    edges.append((h, 3 * (offset + d[1]) + taken[occ]))
                elif d[1] == i and (t == 0 or canon[t - 1] != d):
                    edges.append((h, h + 1))
        offset += len(code)
    for j, (h, color) in enumerate(leg_slots):
        legs.append(color)
        edges.append((h, 3 * n + j))
    return ColoredGraph.build(n, legs, edges)


# ---------------------------------------------------------------------------
# linear combinations


class DiagramVector:
    """Integer combination of canonical graphs of one degree.

    Degenerate generators are 2-torsion, so their coefficients are kept mod 2.
    """

    __slots__ = ("degree", "_terms")

    def __init__(self, degree: int, terms=None):
        self.degree = degree
        clean = {}
        if terms:
            for cg, c in dict(terms).items():
                if cg.degree != degree:
                    raise GraphError(f"term of degree {cg.degree} in a degree-{degree} vector")
                if cg.degenerate:
                    c %= 2
                if c:
                    clean[cg] = c
        self._terms = clean

    @classmethod
    def from_graph(cls, g: ColoredGraph, coef: int = 1) -> DiagramVector:
        return expand(g, coef)

    @classmethod
    def zero(cls, degree):
        return cls(degree)

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def keys(self):
        return sorted(self._terms)

    def __getitem__(self, cg):
        return self._terms.get(cg, 0)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms))

    def _combine(self, other, s):
        if other.degree != self.degree and other and self:
            raise GraphError("adding vectors of different degree")
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, 0) + s * c
        return DiagramVector(self.degree if self else other.degree, acc)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return DiagramVector(self.degree, {k: -c for k, c in self._terms.items()})

    def __mul__(self, s: int):
        return DiagramVector(self.degree, {k: s * c for k, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DiagramVector):
            return NotImplemented
        return self._terms == other._terms and (self.degree == other.degree or not self._terms)

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        body = " ".join(f"{c:+d}*[{format_graph(k.graph())}]" for k, c in self.items())
        return f"DiagramVector(deg={self.degree}: {body or '0'})"


def accumulate(degree, pairs) -> DiagramVector:
    """Sum ``(graph, coefficient)`` pairs of single-colored graphs."""
    acc = {}
    for g, c in pairs:
        if not c:
            continue
        cg, s = canonicalize(g)
        acc[cg] = acc.get(cg, 0) + s * c
    return DiagramVector(degree, acc)


def expand(g: ColoredGraph, coef: int = 1) -> DiagramVector:
    """Distribute multi-color leg labels multilinearly and canonicalize."""
    choices = [_label_terms(l) for l in g.legs]
    pairs = []
    for pick in product(*choices):
        c = coef
        for _, a in pick:
            c *= a
        pairs.append((ColoredGraph(g.degree, tuple(name for name, _ in pick), g.edges), c))
    return accumulate(g.degree, pairs)


def glue_legs(g: ColoredGraph, i: int, j: int) -> ColoredGraph:
    """Join the attachment half-edges of legs ``i`` and ``j`` by an edge."""
    k = len(g.legs)
    if i == j:
        raise GraphError("cannot glue a leg to itself")
    if not (0 <= i < k and 0 <= j < k):
        raise GraphError("leg index out of range")
    n = g.degree
    partner = g.partner()
    a, b = partner[3 * n + i], partner[3 * n + j]
    keep = [l for l in range(k) if l not in (i, j)]
    new_index = {3 * n + l: 3 * n + t for t, l in enumerate(keep)}
    edges = []
    for x, y in g.edges:
        if y >= 3 * n and (y - 3 * n) in (i, j):
            continue
        edges.append((x, new_index.get(y, y)))
    edges.append((a, b))
    return ColoredGraph.build(n, [g.legs[l] for l in keep], edges)
