"""Acceptance suite: eleven criteria, one test (and one pass/fail report
line) each.  Each test asserts its stated tolerance and time budget."""

import os
import random
import time
from itertools import combinations, product
from math import comb

from triwidth import mso
from triwidth.generate import (all_coloured_graphs, all_small_triangulations,
                               closed_layered_chain, layered_chain,
                               random_closed_triangulation,
                               random_coloured_graph, random_triangulation)
from triwidth.graphs import (encode_simple, encoded_size_formula,
                             make_edge_coloured_graph, make_simple_graph)
from triwidth.hasse import build_hasse
from triwidth.morse import morse_optimal, morse_problem
from triwidth.mso import (evaluate, parse_formula, solve_evaluation,
                          solve_extremum)
from triwidth.taut import taut_bruteforce, taut_dp, taut_sentence
from triwidth.translate import (encoded_assignment, translate_coloured,
                                translate_triangulation)
from triwidth.treedecomp import (decompose, lift_to_encoded, lift_to_hasse,
                                 validate_decomposition)
from triwidth.triangulation import (compute_skeleton, dual_graph,
                                    load_and_validate, make_triangulation,
                                    subdivide_simplex)
from triwidth.tv import (load_tv_table, tv_bruteforce, tv_dp, tv_problem,
                         unit_table)

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "triwidth", "data")


def load(name):
    t = load_and_validate(open(os.path.join(DATA, name + ".tri")).read())
    return t, compute_skeleton(t)


class _Budget:
    def __init__(self, name, seconds):
        self.name = name
        self.seconds = seconds

    def __enter__(self):
        self.t0 = time.monotonic()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.monotonic() - self.t0
        status = "FAIL" if exc_type else "PASS"
        print("%s: %s (%.2f s / budget %.0f s)"
              % (self.name, status, elapsed, self.seconds), flush=True)
        if exc_type is None:
            assert elapsed < self.seconds, \
                "%s exceeded its %.0f s budget (%.2f s)" \
                % (self.name, self.seconds, elapsed)


def test_criterion_01_klein_counts():
    with _Budget("criterion 1 (Klein bottle counts)", 1):
        t, sk = load("klein")
        assert sk.f_vector == (1, 3, 2)
        dg = dual_graph(t)
        loops = [a for a in dg.arcs if a[0] == a[1]]
        links = [a for a in dg.arcs if a[0] != a[1]]
        assert len(loops) == 2 and len(links) == 1
        h = build_hasse(t, sk)
        assert len(h.graph.nodes) == 7
        assert len(h.graph.arcs) == 13


def test_criterion_02_solid_torus_counts():
    with _Budget("criterion 2 (solid torus f-vector)", 1):
        _, sk = load("solid_torus")
        assert sk.f_vector == (1, 3, 3, 1)


def test_criterion_03_size_identity():
    with _Budget("criterion 3 (encoding size identity)", 5):
        rng = random.Random(100)
        for _ in range(100):
            g = random_coloured_graph(rng, max_nodes=12, max_colours=3)
            enc = encode_simple(g)
            assert len(enc.graph.nodes) + len(enc.graph.arcs) == \
                encoded_size_formula(len(g.nodes), len(g.arcs),
                                     len(g.colours))


def test_criterion_04_lifted_decompositions():
    with _Budget("criterion 4 (decomposition lifts)", 30):
        rng = random.Random(101)
        for _ in range(100):
            g = random_coloured_graph(rng, max_nodes=8, max_colours=3)
            td = decompose(g.node_skeleton())
            enc = encode_simple(g)
            out = lift_to_encoded(td, g, enc)
            ok, rep = validate_decomposition(enc.graph, out)
            assert ok, rep
            assert out.width <= td.width + comb(len(g.colours) + 3, 2) - 1
        for _ in range(100):
            t = random_triangulation(rng, rng.choice((2, 3)), 3)
            sk = compute_skeleton(t)
            h = build_hasse(t, sk)
            td = decompose(dual_graph(t))
            out = lift_to_hasse(td, t, sk, h)
            ok, rep = validate_decomposition(h.graph, out)
            assert ok, rep
            assert out.width <= (2 ** (t.dim + 1) - 1) * (td.width + 1)


def test_criterion_05_hasse_size_bound():
    with _Budget("criterion 5 (Hasse size bound)", 10):
        rng = random.Random(102)
        done = 0
        while done < 100:
            d = rng.choice((2, 3))
            t = random_triangulation(rng, d, rng.choice((1, 2, 3)))
            sk = compute_skeleton(t)
            if sk.self_identified:
                continue
            h = build_hasse(t, sk)
            assert h.size() <= 2 ** d * (d + 3) * t.n
            done += 1


GRAPH_CORPUS = [
    "(exists node v (= v v))",
    "(forall node v (= v v))",
    "(exists node u (exists node v (adj u v)))",
    "(forall node v (exists node w (adj v w)))",
    "(exists arc e (col 1 e))",
    "(forall arc e (col 1 e))",
    "(exists node u (exists node v (adjc 1 u v)))",
    "(forall arc e (exists node v (inc e v)))",
    "(forall node u (forall node v (implies (adj u v) (adj v u))))",
    "(exists arc e (and (col 1 e) (exists node v (inc e v))))",
    "(exists node u (exists node v (and (not (= u v)) (not (adj u v)))))",
    "(forall node u (forall node v (or (= u v) (adj u v))))",
    "(exists node v (not (exists node w (adj v w))))",
    "(implies (exists arc e (col 1 e)) (exists node u (exists node v (adjc 1 u v))))",
    "(forall arc e (forall node u (forall node v (implies (and (inc e u) (and (inc e v) (not (= u v)))) (adj u v)))))",
    "(exists node u (forall node v (or (= u v) (adj u v))))",
    "(or (exists node u (exists node v (adj u v))) (forall node v (not (exists node w (adj v w)))))",
    "(exists nodeset A (forall node v (in v A)))",
    "(exists nodeset A (forall node u (forall node v (implies (and (in u A) (in v A)) (not (adj u v))))))",
    "(forall nodeset A (implies (exists node v (in v A)) (exists node v (and (in v A) (forall node w (implies (and (in w A) (not (= w v))) (not (= w v))))))))",
]

TRI_CORPUS_D2 = [
    "(exists face 0 v (= v v))",
    "(forall face 0 v (= v v))",
    "(exists face 2 s (= s s))",
    "(forall face 1 e (exists face 0 v (sub 0 v e)))",
    "(forall face 1 e (exists face 0 v (sub 1 v e)))",
    "(exists face 1 e (exists face 2 s (sub 01 e s)))",
    "(exists face 1 e (exists face 2 s (sub 10 e s)))",
    "(exists face 1 e (exists face 2 s (sub 02 e s)))",
    "(exists face 1 e (exists face 2 s (sub 12 e s)))",
    "(forall face 2 s (exists face 1 e (sub 01 e s)))",
    "(forall face 2 s (exists face 0 v (sub 2 v s)))",
    "(exists face 0 v (exists face 2 s (sub 0 v s)))",
    "(exists face 0 u (exists face 0 v (not (= u v))))",
    "(forall face 1 e (forall face 2 s (implies (sub 01 e s) (sub 01 e s))))",
    "(exists face 1 e (not (exists face 2 s (or (sub 01 e s) (sub 10 e s)))))",
    "(implies (exists face 2 s (= s s)) (exists face 1 e (= e e)))",
    "(exists face 1 d (exists face 1 e (not (= d e))))",
    "(exists faceset 1 E (forall face 1 e (in e E)))",
    "(exists faceset 0 A (forall face 0 v (in v A)))",
    "(forall faceset 2 S (implies (exists face 2 s (in s S)) (exists face 2 s (in s S))))",
]


def test_criterion_06_translation_equivalence():
    with _Budget("criterion 6 (translation equivalence)", 120):
        # graphs: exhaustive for one colour up to 4 nodes, exhaustive for
        # two colours up to 2 nodes, random sample for two colours beyond
        suite = list(all_coloured_graphs(4, 1)) + \
            list(all_coloured_graphs(2, 2))
        rng = random.Random(103)
        suite += [random_coloured_graph(rng, max_nodes=4, max_colours=2)
                  for _ in range(10)]
        phis = [parse_formula(s) for s in GRAPH_CORPUS]
        for g in suite:
            k = len(g.colours)
            enc = encode_simple(g)
            for phi in phis:
                bar = translate_coloured(phi, k)
                assert evaluate(g, phi) == evaluate(enc.graph, bar)
        # triangulations: exhaustive for one 2-simplex, random 2-simplex
        tris = list(all_small_triangulations(2, 1))
        rng2 = random.Random(104)
        tris += [random_triangulation(rng2, 2, 2) for _ in range(10)]
        phis2 = [parse_formula(s) for s in TRI_CORPUS_D2]
        for t in tris:
            sk = compute_skeleton(t)
            h = build_hasse(t, sk)
            for phi in phis2:
                bar = translate_triangulation(phi, 2)
                assert evaluate((t, sk), phi) == evaluate(h, bar)
        # solution-count bijection for free-variable formulas
        free = (("A", mso.NODESET),)
        texts = [
            "(forall node u (forall node v (implies (and (in u A) (in v A)) (not (adj u v)))))",
            "(forall node v (in v A))",
            "(exists node v (and (in v A) (forall node w (implies (adj v w) (in w A)))))",
        ]
        for g in list(all_coloured_graphs(3, 1))[:8]:
            enc = encode_simple(g)
            st = mso.as_structure(g)
            st2 = mso.as_structure(enc.graph)
            for text in texts:
                phi = parse_formula(text, signature=("graph", 1),
                                    free_vars=free)
                bar = translate_coloured(phi, 1, free_vars=free)
                lhs = sum(1 for A in _subsets(st.carrier(mso.NODE))
                          if evaluate(g, phi, {"A": A}))
                rhs = sum(1 for A in _subsets(st2.carrier(mso.NODE))
                          if evaluate(enc.graph, bar, {"A": A}))
                assert lhs == rhs, (g, text, lhs, rhs)


def _subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        for c in combinations(items, r):
            yield frozenset(c)


def _orientable_bruteforce(t):
    """2^n oracle: orientations of the simplices consistent across gluings."""
    def sign(perm):
        s = 1
        perm = list(perm)
        for i in range(len(perm)):
            for j in range(i + 1, len(perm)):
                if perm[i] > perm[j]:
                    s = -s
        return s
    for eps in product((1, -1), repeat=t.n):
        ok = True
        for g in t.gluings:
            if eps[g.s2] != -eps[g.s1] * sign(g.perm):
                ok = False
                break
        if ok:
            return True
    return False


def test_criterion_07_worked_logic_examples():
    with _Budget("criterion 7 (worked logic examples)", 10):
        three_col = parse_formula(
            "(exists nodeset R (exists nodeset G (exists nodeset B "
            "(and (forall node v (or (in v R) (or (in v G) (in v B)))) "
            "(forall node u (forall node v (implies (adj u v) "
            "(not (or (and (in u R) (in v R)) (or (and (in u G) (in v G)) "
            "(and (in u B) (in v B))))))))))))")
        c3 = make_simple_graph(range(3), [(0, 1), (1, 2), (0, 2)])
        k4 = make_simple_graph(range(4), combinations(range(4), 2))
        assert evaluate(c3, three_col) is True
        assert evaluate(k4, three_col) is False
        # orientability via the 2^n brute-force oracle
        t_klein, _ = load("klein")
        t_sphere, _ = load("sphere2")
        assert _orientable_bruteforce(t_klein) is False
        assert _orientable_bruteforce(t_sphere) is True
        # dominating set minimum on the 3-path
        p3 = make_simple_graph(range(3), [(0, 1), (1, 2)])
        f = parse_formula(
            "(forall node v (exists node w (and (in w D) "
            "(or (= v w) (adj v w)))))",
            signature=("graph", 0), free_vars=[("D", mso.NODESET)])
        val, _ = solve_extremum(
            p3, mso.ExtremumProblem(f, (("D", mso.NODESET),), (1,)))
        assert val == 1


def test_criterion_08_taut_three_way():
    with _Budget("criterion 8 (taut three-way agreement)", 120):
        t1 = make_triangulation(3, 1, [])
        sk1 = compute_skeleton(t1)
        assert taut_bruteforce(t1, sk1) is None
        phi = taut_sentence()
        rng = random.Random(105)
        for _ in range(200):
            t = random_triangulation(rng, 3, rng.randint(1, 5))
            sk = compute_skeleton(t)
            td = decompose(dual_graph(t))
            brute = taut_bruteforce(t, sk)
            dp = taut_dp(t, sk, td)
            assert (brute is None) == (dp is None)
            assert evaluate((t, sk), phi) == (brute is not None)


def test_criterion_09_morse_klein():
    with _Budget("criterion 9 (Morse on the Klein bottle)", 30):
        t, sk = load("klein")
        h = build_hasse(t, sk)
        c, M = morse_optimal(h)
        assert c == 4 and len(M) == 1
        best = solve_extremum((t, sk), morse_problem(2))
        assert best is not None and best[0] == 4


def test_criterion_10_turaev_viro():
    with _Budget("criterion 10 (Turaev-Viro)", 300):
        rng = random.Random(106)
        for _ in range(100):
            t = random_closed_triangulation(rng, 3, rng.choice((2, 4)))
            sk = compute_skeleton(t)
            td = decompose(dual_graph(t))
            for r in (3, 4):
                tab = unit_table(r)
                assert tv_bruteforce(t, sk, r, tab) == \
                    tv_dp(t, sk, r, tab, td)
        table = load_tv_table(open(os.path.join(DATA, "tv_r3.json")).read())
        for name in ("s3_double", "closed2b"):
            t, _ = load(name)
            vals = []
            for k in range(3):
                sk = compute_skeleton(t)
                td = decompose(dual_graph(t))
                v = tv_dp(t, sk, 3, table, td)
                assert abs(v - tv_bruteforce(t, sk, 3, table)) \
                    <= 1e-9 * max(1.0, abs(v))
                vals.append(v)
                t = subdivide_simplex(t, 0)
            for v in vals[1:]:
                assert abs(v - vals[0]) <= 1e-9 * abs(vals[0])
        t, sk = load("s3_double")
        prob = tv_problem(t, sk, 3, table)
        val = solve_evaluation((t, sk), prob)
        brute = tv_bruteforce(t, sk, 3, table)
        assert abs(val - brute) <= 1e-9 * max(1.0, abs(brute))


def test_criterion_11_scaling():
    with _Budget("criterion 11 (layered-family scaling)", 150):
        # taut_dp at n = 200 under 60 s
        times = {}
        for n in (50, 100, 150, 200):
            t = layered_chain(n)
            sk = compute_skeleton(t)
            td = decompose(dual_graph(t))
            best = None
            for _ in range(3):
                t0 = time.monotonic()
                taut_dp(t, sk, td)
                dt = time.monotonic() - t0
                best = dt if best is None else min(best, dt)
            times[n] = best
        assert times[200] < 60
        # tv_dp at n = 60 under 60 s on the closed variant
        t = closed_layered_chain(60)
        sk = compute_skeleton(t)
        td = decompose(dual_graph(t))
        t0 = time.monotonic()
        tv_dp(t, sk, 3, unit_table(3), td)
        assert time.monotonic() - t0 < 60
        # affine fit of taut_dp time vs n with R^2 >= 0.95
        xs = sorted(times)
        ys = [times[n] for n in xs]
        mx = sum(xs) / len(xs)
        my = sum(ys) / len(ys)
        sxx = sum((x - mx) ** 2 for x in xs)
        sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
        slope = sxy / sxx
        intercept = my - slope * mx
        ss_res = sum((y - (slope * x + intercept)) ** 2
                     for x, y in zip(xs, ys))
        ss_tot = sum((y - my) ** 2 for y in ys)
        r2 = 1 - ss_res / ss_tot
        print("taut_dp times:", {n: round(v, 4) for n, v in times.items()},
              "R^2 = %.4f" % r2, flush=True)
        assert r2 >= 0.95
