"""Random and parametric instance generators used by tests and timing runs."""

import random
from itertools import combinations, permutations

from .graphs import make_edge_coloured_graph, make_simple_graph
from .triangulation import Gluing, make_triangulation


def random_triangulation(rng, dim, n, glue_prob=0.6):
    """Random valid triangulation: pair up facet slots with random maps."""
    slots = [(s, f) for s in range(n) for f in range(dim + 1)]
    rng.shuffle(slots)
    gluings = []
    while len(slots) >= 2:
        a = slots.pop()
        if rng.random() > glue_prob:
            continue
        b = slots.pop()
        gluings.append(_random_gluing(rng, dim, a, b))
    return make_triangulation(dim, n, gluings)


def random_closed_triangulation(rng, dim, n):
    """Random triangulation with every facet glued (n*(dim+1) even)."""
    slots = [(s, f) for s in range(n) for f in range(dim + 1)]
    if len(slots) % 2:
        raise ValueError("odd slot count cannot be closed")
    rng.shuffle(slots)
    gluings = []
    while slots:
        a = slots.pop()
        b = slots.pop()
        gluings.append(_random_gluing(rng, dim, a, b))
    return make_triangulation(dim, n, gluings)


def _random_gluing(rng, dim, a, b):
    (s1, f1), (s2, f2) = a, b
    rest = [v for v in range(dim + 1) if v != f2]
    rng.shuffle(rest)
    perm = [0] * (dim + 1)
    it = iter(rest)
    for v in range(dim + 1):
        perm[v] = f2 if v == f1 else next(it)
    return Gluing(s1, f1, s2, f2, tuple(perm))


def layered_chain(n, dim=3):
    """Bounded-pathwidth family: simplex i's last facet meets simplex
    (i+1)'s facet 0 under a cyclic relabelling."""
    perm = tuple(list(range(1, dim + 1)) + [0])
    gluings = [Gluing(i, dim, i + 1, 0, perm) for i in range(n - 1)]
    return make_triangulation(dim, n, gluings)


def closed_layered_chain(n, dim=3):
    """Closed bounded-pathwidth family: the chain of layered_chain closed
    up by gluing facets 1 and 2 of every simplex to each other and the
    two chain ends together."""
    if n < 2:
        raise ValueError("need at least two simplices")
    perm = tuple(list(range(1, dim + 1)) + [0])
    gluings = [Gluing(i, dim, i + 1, 0, perm) for i in range(n - 1)]
    gluings.append(Gluing(n - 1, dim, 0, 0, perm))
    side = tuple(2 if v == 1 else 1 if v == 2 else v for v in range(dim + 1))
    for i in range(n):
        gluings.append(Gluing(i, 1, i, 2, side))
    return make_triangulation(dim, n, gluings)


def all_small_triangulations(dim, n):
    """Every valid triangulation on n labelled d-simplices (all subsets of
    slot pairings, all gluing maps).  Desk scale only."""
    from itertools import permutations as perms
    slots = [(s, f) for s in range(n) for f in range(dim + 1)]

    def maps(a, b):
        (s1, f1), (s2, f2) = a, b
        rest1 = [v for v in range(dim + 1) if v != f1]
        rest2 = [v for v in range(dim + 1) if v != f2]
        for img in perms(rest2):
            perm = [0] * (dim + 1)
            perm[f1] = f2
            for v, w in zip(rest1, img):
                perm[v] = w
            yield tuple(perm)

    def rec(remaining, gluings):
        if not remaining:
            yield make_triangulation(dim, n, gluings)
            return
        a = remaining[0]
        # leave slot a unglued
        yield from rec(remaining[1:], gluings)
        for b in remaining[1:]:
            rest = [s for s in remaining[1:] if s != b]
            for perm in maps(a, b):
                yield from rec(rest, gluings
                               + [Gluing(a[0], a[1], b[0], b[1], perm)])

    yield from rec(slots, [])


def random_coloured_graph(rng, max_nodes=12, max_colours=3, arc_prob=0.3):
    n = rng.randint(1, max_nodes)
    k = rng.randint(1, max_colours)
    colours = ["c%d" % i for i in range(1, k + 1)]
    arcs = set()
    for u, v in combinations(range(n), 2):
        for c in colours:
            if rng.random() < arc_prob:
                arcs.add(((u, v), c))
    return make_edge_coloured_graph(range(n), colours, arcs)


def random_simple_graph(rng, max_nodes=10, arc_prob=0.4):
    n = rng.randint(1, max_nodes)
    arcs = [(u, v) for u, v in combinations(range(n), 2)
            if rng.random() < arc_prob]
    return make_simple_graph(range(n), arcs)


def all_coloured_graphs(max_nodes, k):
    """Every edge-coloured graph on up to max_nodes labelled nodes with
    exactly k colours (arc subsets of the complete k-coloured graph)."""
    colours = ["c%d" % i for i in range(1, k + 1)]
    for n in range(1, max_nodes + 1):
        pairs = [((u, v), c) for u, v in combinations(range(n), 2)
                 for c in colours]
        for r in range(len(pairs) + 1):
            for chosen in combinations(pairs, r):
                yield make_edge_coloured_graph(range(n), colours, chosen)
