"""Random graph generation and relabeling shared by several test modules."""
from clover.graphs import ColoredGraph


def relabel(g: ColoredGraph, vperm, rotations, flips, legperm):
    """Apply a vertex permutation, per-vertex slot permutations and a leg permutation.

    Returns the new graph and the product of slot-permutation parities.
    """
    n = g.degree
    sign = 1
    slotmap = {}
    for v in range(n):
        order = [(s + rotations[v]) % 3 for s in range(3)]
        if flips[v]:
            order = [order[0], order[2], order[1]]
            sign = -sign
        for s in range(3):
            slotmap[3 * v + s] = 3 * vperm[v] + order[s]
    for j in range(len(g.legs)):
        slotmap[3 * n + j] = 3 * n + legperm[j]
    legs = [None] * len(g.legs)
    for j, c in enumerate(g.legs):
        legs[legperm[j]] = c
    edges = [(slotmap[a], slotmap[b]) for a, b in g.edges]
    return ColoredGraph.build(n, legs, edges), sign


def random_graph(rng, degree, alphabet=("x", "y")):
    slots = list(range(3 * degree))
    rng.shuffle(slots)
    k = rng.choice([k for k in range(3 * degree + 1) if (3 * degree - k) % 2 == 0])
    legs = [rng.choice(alphabet) for _ in range(k)]
    edges = [(slots[j], 3 * degree + j) for j in range(k)]
    rest = slots[k:]
    edges += [(rest[i], rest[i + 1]) for i in range(0, len(rest), 2)]
    return ColoredGraph.build(degree, legs, edges)


def random_relabel(rng, g):
    n = g.degree
    vperm = list(range(n))
    rng.shuffle(vperm)
    legperm = list(range(len(g.legs)))
    rng.shuffle(legperm)
    rot = [rng.randrange(3) for _ in range(n)]
    flips = [rng.randrange(2) for _ in range(n)]
    return relabel(g, vperm, rot, flips, legperm)


def slot_map(g, vperm, rotations, flips):
    """The half-edge renumbering used by :func:`relabel` on vertex slots."""
    out = {}
    for v in range(g.degree):
        order = [(s + rotations[v]) % 3 for s in range(3)]
        if flips[v]:
            order = [order[0], order[2], order[1]]
        for s in range(3):
            out[3 * v + s] = 3 * vperm[v] + order[s]
    return out
