import os

from triwidth.hasse import EMPTY_COLOUR, build_hasse
from triwidth.morse import (critical_count, morse_optimal, morse_problem,
                            morse_validate)
from triwidth.mso import solve_extremum
from triwidth.triangulation import (compute_skeleton, load_and_validate,
                                    make_triangulation)

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "triwidth", "data")


def klein_hasse():
    t = load_and_validate(open(os.path.join(DATA, "klein.tri")).read())
    sk = compute_skeleton(t)
    return t, sk, build_hasse(t, sk)


def test_empty_matching_valid():
    _, _, h = klein_hasse()
    ok, rep = morse_validate(h, set())
    assert ok
    assert critical_count(h, set()) == len(h.graph.nodes) - 1


def test_validator_rejects_empty_face_arcs():
    _, _, h = klein_hasse()
    bad = [a for a in h.graph.arcs if a[1] == EMPTY_COLOUR]
    ok, rep = morse_validate(h, {bad[0]})
    assert not ok and rep["condition"] == "empty-face"


def test_validator_rejects_shared_endpoints():
    _, _, h = klein_hasse()
    arcs = sorted(a for a in h.graph.arcs if a[1] != EMPTY_COLOUR)
    by_node = {}
    for arc in arcs:
        for x in arc[0]:
            by_node.setdefault(x, []).append(arc)
    pair = next(v for v in by_node.values() if len(v) >= 2)[:2]
    ok, rep = morse_validate(h, set(pair))
    assert not ok and rep["condition"] == "disjoint"


def test_klein_optimum():
    _, _, h = klein_hasse()
    c, M = morse_optimal(h)
    assert c == 4
    assert len(M) == 1
    ok, rep = morse_validate(h, M)
    assert ok, rep


def test_unglued_triangle_optimum():
    t = make_triangulation(2, 1, [])
    sk = compute_skeleton(t)
    h = build_hasse(t, sk)
    c, M = morse_optimal(h)
    assert c == 1     # a collapsible simplex has a single critical face


def test_extremum_encoding_matches_optimal():
    t, sk, h = klein_hasse()
    prob = morse_problem(2)
    best = solve_extremum((t, sk), prob)
    assert best is not None
    val, sets = best
    assert val == 4
