import os
import random

import pytest

from triwidth.triangulation import (Gluing, TriangulationError,
                                    compute_skeleton, dual_graph,
                                    load_and_validate, make_triangulation,
                                    parse_triangulation, subdivide_simplex,
                                    subface_holds, subface_pairs)
from triwidth.generate import random_triangulation

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "triwidth", "data")


def load(name):
    with open(os.path.join(DATA, name + ".tri")) as fh:
        return load_and_validate(fh.read())


def test_parse_round_trip():
    t = load("klein")
    assert parse_triangulation(t.to_text()) == t


def test_parse_comments_and_reverse_records():
    text = ("# a triangle pair\ndim 2\nsimplices 2\n"
            "glue 0 0 1 0 : 0 1 2\n"
            "glue 1 0 0 0 : 0 1 2\n")   # explicit reverse record
    t = parse_triangulation(text)
    assert len(t.gluings) == 1


def test_validation_rejects_bad_gluings():
    with pytest.raises(TriangulationError):
        make_triangulation(2, 1, [Gluing(0, 0, 0, 0, (0, 1, 2))])
    with pytest.raises(TriangulationError):
        make_triangulation(2, 2, [Gluing(0, 0, 1, 1, (0, 1, 2))])
    with pytest.raises(TriangulationError):
        make_triangulation(2, 2, [Gluing(0, 0, 1, 0, (0, 0, 2))])
    with pytest.raises(TriangulationError):
        make_triangulation(2, 2, [Gluing(0, 0, 1, 0, (0, 1, 2)),
                                  Gluing(0, 0, 1, 1, (1, 0, 2))])


def test_klein_skeleton():
    t = load("klein")
    sk = compute_skeleton(t)
    assert sk.f_vector == (1, 3, 2)
    assert t.is_closed()
    assert not sk.self_identified


def test_solid_torus_skeleton():
    t = load("solid_torus")
    sk = compute_skeleton(t)
    assert sk.f_vector == (1, 3, 3, 1)
    assert len(t.boundary_slots()) == 2


def test_unglued_simplex_counts():
    t = make_triangulation(2, 1, [])
    sk = compute_skeleton(t)
    assert sk.f_vector == (3, 3, 1)


def test_self_identification_detected():
    t = load("closed2b")
    sk = compute_skeleton(t)
    assert t.is_closed()
    assert sk.self_identified


def test_subface_relations_klein():
    t = load("klein")
    sk = compute_skeleton(t)
    v = sk.faces[0][0]
    for e in sk.faces[1]:
        assert subface_holds(sk, v, (0,), e)
        assert subface_holds(sk, v, (1,), e)
    # every edge sits in each triangle under some labelling
    for tri in sk.faces[2]:
        assert any(subface_holds(sk, e, pi, tri)
                   for e in sk.faces[1]
                   for pi in ((0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)))


def test_subface_pairs_matches_pointwise():
    rng = random.Random(3)
    for _ in range(10):
        t = random_triangulation(rng, 2, 3)
        sk = compute_skeleton(t)
        for pi in ((0, 1), (1, 0)):
            pairs = subface_pairs(sk, 1, 2, pi)
            for e in sk.faces[1]:
                for g in sk.faces[2]:
                    assert ((e.id, g.id) in pairs) == subface_holds(sk, e, pi, g)


def test_dual_graph_klein():
    t = load("klein")
    dg = dual_graph(t)
    assert list(dg.nodes) == [0, 1]
    assert sorted(dg.arcs) == [(0, 0), (0, 1), (1, 1)]


def test_subdivision_counts():
    t = make_triangulation(2, 1, [])
    out = subdivide_simplex(t, 0)
    sk = compute_skeleton(out)
    assert out.n == 3
    assert sk.f_vector == (4, 6, 3)


def test_subdivision_preserves_closedness_and_boundary():
    rng = random.Random(5)
    for _ in range(10):
        t = random_triangulation(rng, 3, 2)
        out = subdivide_simplex(t, rng.randrange(t.n))
        assert out.n == t.n + 3
        assert len(out.boundary_slots()) == len(t.boundary_slots())


def test_subdivision_index_error():
    t = make_triangulation(2, 1, [])
    with pytest.raises(TriangulationError):
        subdivide_simplex(t, 1)
