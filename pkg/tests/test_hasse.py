import json
import math
import os
import random

from triwidth.generate import random_triangulation
from triwidth.hasse import (EMPTY_COLOUR, build_hasse, hasse_colours,
                            hasse_to_json, level_colours)
from triwidth.triangulation import compute_skeleton, load_and_validate

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "triwidth", "data")


def load(name):
    with open(os.path.join(DATA, name + ".tri")) as fh:
        return load_and_validate(fh.read())


def test_colour_counts():
    # level i carries the injective (i+1)-sequences over 0..i+1
    for i in range(4):
        assert len(level_colours(i)) == math.factorial(i + 2)
    for d in (1, 2, 3):
        assert len(hasse_colours(d)) == 1 + sum(
            math.factorial(i) for i in range(2, d + 2))


def test_klein_diagram_counts():
    t = load("klein")
    h = build_hasse(t, compute_skeleton(t))
    assert len(h.graph.nodes) == 7      # 6 faces + empty node
    assert len(h.graph.arcs) == 13
    assert sum(1 for (_, c) in h.graph.arcs if c == EMPTY_COLOUR) == 1


def test_solid_torus_diagram_counts():
    t = load("solid_torus")
    h = build_hasse(t, compute_skeleton(t))
    assert len(h.graph.nodes) == 9
    assert len(h.graph.arcs) == 20


def test_unglued_triangle_diagram_counts():
    from triwidth.triangulation import make_triangulation
    t = make_triangulation(2, 1, [])
    h = build_hasse(t, compute_skeleton(t))
    assert len(h.graph.nodes) == 8
    assert len(h.graph.arcs) == 12


def test_arc_colours_match_levels():
    t = load("klein")
    h = build_hasse(t, compute_skeleton(t))
    for (u, v), c in h.graph.arcs:
        if c == EMPTY_COLOUR:
            assert h.empty_node in (u, v)
        else:
            lo, hi = sorted((u, v), key=lambda x: h.level[x])
            assert c in level_colours(h.level[lo])


def test_size_bound_random():
    rng = random.Random(13)
    done = 0
    while done < 30:
        t = random_triangulation(rng, rng.choice((2, 3)), 2)
        sk = compute_skeleton(t)
        if sk.self_identified:
            continue
        h = build_hasse(t, sk)
        assert h.size() <= 2 ** t.dim * (t.dim + 3) * t.n
        done += 1


def test_json_output_shape():
    t = load("klein")
    doc = json.loads(hasse_to_json(build_hasse(t, compute_skeleton(t))))
    assert doc["dim"] == 2
    assert len(doc["nodes"]) == 7
    assert len(doc["arcs"]) == 13
