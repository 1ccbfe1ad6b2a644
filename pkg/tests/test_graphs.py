import random

import pytest

from triwidth.graphs import (GraphError, encode_simple, encoded_size_formula,
                             make_edge_coloured_graph, make_simple_graph,
                             parse_graph)
from triwidth.generate import random_coloured_graph


def test_simple_graph_no_loops():
    with pytest.raises(GraphError):
        make_simple_graph([0, 1], [(0, 0)])


def test_coloured_graph_rejects_duplicate_coloured_arc():
    g = make_edge_coloured_graph([0, 1], ["a", "b"],
                                 [((0, 1), "a"), ((1, 0), "a")])
    assert len(g.arcs) == 1
    with pytest.raises(GraphError):
        make_edge_coloured_graph([0, 1], ["a"], [((0, 1), "zzz")])


def test_parse_graph_formats():
    g = parse_graph("node 0\nnode 1\narc 0 1\n")
    assert not hasattr(g, "colours")
    assert g.arcs == ((0, 1),)
    g = parse_graph("colour red\nnode 0\nnode 1\narc 0 1 red\n")
    assert g.colours == ("red",)


def test_encoded_size_formula_examples():
    # size counts nodes plus arcs
    assert encoded_size_formula(3, 2, 2) == 27
    assert encoded_size_formula(0, 0, 1) == 6   # 3 clique nodes + 3 arcs


def test_encode_empty_one_colour():
    g = make_edge_coloured_graph([0, 1, 2], ["c1"], [])
    enc = encode_simple(g)
    assert len(enc.graph.nodes) == 3 + 3
    assert len(enc.graph.arcs) == 3     # one triangle


def test_encode_example_counts():
    g = make_edge_coloured_graph([0, 1, 2], ["a", "b"],
                                 [((0, 1), "a"), ((1, 2), "b")])
    enc = encode_simple(g)
    assert len(enc.graph.nodes) + len(enc.graph.arcs) == 27


def test_encode_degree_signature():
    rng = random.Random(11)
    for _ in range(20):
        g = random_coloured_graph(rng, max_nodes=6, max_colours=2)
        enc = encode_simple(g)
        deg = {v: 0 for v in enc.graph.nodes}
        for u, v in enc.graph.arcs:
            deg[u] += 1
            deg[v] += 1
        arc_count = {}
        for (u, v), c in g.arcs:
            i = g.colours.index(c) + 1
            arc_count[i] = arc_count.get(i, 0) + 1
        for n, o in enc.origin.items():
            if o[0] == "arc":
                assert deg[n] == 3
            elif o[0] == "node":
                v = o[1]
                assert deg[n] == sum(1 for (a, b), _ in g.arcs if v in (a, b))
            elif o == ("clique", o[1], 1):
                i = o[1]
                assert deg[n] == (i + 1) + arc_count.get(i, 0)


def test_encode_size_matches_formula_randomised():
    rng = random.Random(2)
    for _ in range(25):
        g = random_coloured_graph(rng, max_nodes=8, max_colours=3)
        enc = encode_simple(g)
        assert len(enc.graph.nodes) + len(enc.graph.arcs) == \
            encoded_size_formula(len(g.nodes), len(g.arcs), len(g.colours))


def test_encode_output_simple():
    rng = random.Random(4)
    for _ in range(10):
        g = random_coloured_graph(rng, max_nodes=6)
        enc = encode_simple(g)
        arcs = list(enc.graph.arcs)
        assert len(arcs) == len(set(arcs))
        assert all(u != v for u, v in arcs)
