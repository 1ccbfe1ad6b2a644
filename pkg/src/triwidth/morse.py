"""Discrete Morse matchings on coloured Hasse diagrams.

A Morse matching is a set M of Hasse arcs that avoids the empty-face
node, uses every node at most once, and admits no alternating cycle:
orienting matched arcs upward and unmatched level-(i, i+1) arcs downward
must leave every level pair acyclic.  Unmatched faces are critical, and
c(M) = (total faces) - 2|M| counts them.

Backends: an exact branch-and-bound optimiser over the arcs, and an
emitted extremum problem over the triangulation signature whose free
sets describe the matching through its upper endpoints (one set per arc
colour; only meaningful when no face class is self-identified, since the
upper endpoint and colour then pin down the arc uniquely).
"""

from . import mso
from .mso import conj, disj, exists, forall, And, Or, Not, Eq, In, Sub, Implies
from .hasse import EMPTY_COLOUR, level_colours


class MorseError(ValueError):
    pass


def _arc_level(h, arc):
    (u, v), c = arc
    if c == EMPTY_COLOUR:
        return None
    return len(c) - 1


def _oriented(h, arcs, M, i):
    """Directed edges of the level-(i, i+1) alternation digraph."""
    out = {}
    for arc in arcs:
        if _arc_level(h, arc) != i:
            continue
        (u, v), c = arc
        lo, hi = (u, v) if h.level[u] == i else (v, u)
        if arc in M:
            out.setdefault(lo, set()).add(hi)
        else:
            out.setdefault(hi, set()).add(lo)
    return out


def _has_cycle(digraph):
    state = {}

    def visit(x):
        state[x] = 1
        for y in digraph.get(x, ()):
            s = state.get(y)
            if s == 1:
                return True
            if s is None and visit(y):
                return True
        state[x] = 2
        return False

    return any(state.get(x) is None and visit(x) for x in sorted(digraph))


def morse_validate(h, M):
    """(ok, violation report) for an arc set M of the Hasse diagram."""
    M = set(M)
    arcset = set(h.graph.arcs)
    for arc in M:
        if arc not in arcset:
            return False, {"condition": "arcs", "witness": arc}
        if arc[1] == EMPTY_COLOUR:
            return False, {"condition": "empty-face", "witness": arc}
    used = {}
    for arc in sorted(M):
        for x in arc[0]:
            if x in used:
                return False, {"condition": "disjoint", "witness": (used[x], arc)}
            used[x] = arc
    for i in range(h.dim):
        if _has_cycle(_oriented(h, h.graph.arcs, M, i)):
            return False, {"condition": "alternating-cycle", "witness": i}
    return True, None


def critical_count(h, M):
    faces = len(h.graph.nodes) - 1   # all levels, without the empty node
    return faces - 2 * len(M)


def morse_optimal(h, max_arcs=64):
    """Exact minimum of c(M) by branch and bound over the matchable arcs.

    Returns (c_min, M).  Arcs are tried in sorted order, inclusion before
    exclusion, so the result is deterministic.
    """
    arcs = sorted(a for a in h.graph.arcs if a[1] != EMPTY_COLOUR)
    if len(arcs) > max_arcs:
        raise MorseError("diagram has %d matchable arcs, cap is %d"
                         % (len(arcs), max_arcs))
    best = []

    def extend(idx, M, used):
        nonlocal best
        remaining = sum(1 for a in arcs[idx:]
                        if not (set(a[0]) & used))
        if len(M) + remaining <= len(best):
            return
        if idx == len(arcs):
            if len(M) > len(best):
                best = list(M)
            return
        arc = arcs[idx]
        (u, v), c = arc
        if u not in used and v not in used:
            M.append(arc)
            lvl = _arc_level(h, arc)
            if not _has_cycle(_oriented(h, h.graph.arcs, set(M), lvl)):
                extend(idx + 1, M, used | {u, v})
            M.pop()
        extend(idx + 1, M, used)

    extend(0, [], set())
    M = sorted(best)
    ok, report = morse_validate(h, M)
    assert ok, report
    return critical_count(h, M), M


# ---------------------------------------------------------------------------
# extremum encoding


def _w_name(i, colour):
    return "W%d_%s" % (i, colour)


def morse_problem(d):
    """Extremum problem over the dimension-d triangulation signature.

    Free sets: V0..Vd (forced to hold every face) and, per level i and
    level-i colour pi, the set W_pi of (i+1)-faces matched downward
    through their pi-subface.  The objective sum |Vi| - 2 sum |W| is then
    c(M).  Constraints force the W families to describe a genuine Morse
    matching; alternating cycles are excluded by forbidding any nonempty
    set C of i-faces in which every member steps to another member (up
    its matched arc, down some unmatched arc).
    """
    names = []
    for i in range(d + 1):
        names.append(("V%d" % i, mso.faceset_sort(i)))
    w_of_level = {}
    for i in range(d):
        w_of_level[i] = [(_w_name(i, c), c) for c in level_colours(i)]
        for name, _ in w_of_level[i]:
            names.append((name, mso.faceset_sort(i + 1)))

    clauses = []
    for i in range(d + 1):
        clauses.append(forall(mso.face_sort(i), "x", In("x", "V%d" % i)))

    def sub(pi, f, g):
        return Sub(tuple(int(x) for x in pi), f, g)

    for i in range(d):
        ws = w_of_level[i]
        fs, gs = mso.face_sort(i), mso.face_sort(i + 1)
        # Membership needs the matching arc to exist.
        for name, c in ws:
            clauses.append(forall(gs, "g", Implies(
                In("g", name), exists(fs, "f", sub(c, "f", "g")))))
        # Each upper endpoint is matched through at most one colour.
        for a in range(len(ws)):
            for b in range(a + 1, len(ws)):
                clauses.append(forall(gs, "g", Not(
                    And(In("g", ws[a][0]), In("g", ws[b][0])))))
        # Each lower endpoint is matched upward at most once.
        for a in range(len(ws)):
            for b in range(a, len(ws)):
                na, ca = ws[a]
                nb, cb = ws[b]
                distinct = [] if a < b else [Not(Eq("g1", "g2"))]
                clauses.append(forall(fs, "f", forall(gs, "g1", forall(
                    gs, "g2", Not(conj(distinct + [
                        In("g1", na), In("g2", nb),
                        sub(ca, "f", "g1"), sub(cb, "f", "g2")]))))))
    # A face cannot be matched both upward and downward.
    for i in range(d - 1):
        here = w_of_level[i]
        above = w_of_level[i + 1]
        gs, hs = mso.face_sort(i + 1), mso.face_sort(i + 2)
        up = exists(hs, "h", disj([And(In("h", nm), sub(c, "g", "h"))
                                   for nm, c in above]))
        down = disj([In("g", nm) for nm, _ in here])
        clauses.append(forall(gs, "g", Not(And(down, up))))
    # No alternating cycles: no nonempty C of i-faces closed under steps.
    for i in range(d):
        ws = w_of_level[i]
        fs, gs = mso.face_sort(i), mso.face_sort(i + 1)
        cs = mso.faceset_sort(i)
        matched_up = disj([And(In("g", nm), sub(c, "f", "g"))
                           for nm, c in ws])
        down_unmatched = disj([And(sub(c, "f2", "g"), Not(In("g", nm)))
                               for nm, c in ws])
        step = exists(gs, "g", And(matched_up, down_unmatched))
        closed = forall(fs, "f", Implies(
            In("f", "C"), exists(fs, "f2", And(In("f2", "C"), step))))
        nonempty = exists(fs, "f", In("f", "C"))
        clauses.append(Not(exists(cs, "C", And(nonempty, closed))))

    coeffs = []
    for name, sort in names:
        coeffs.append(1 if name.startswith("V") else -2)
    return mso.ExtremumProblem(conj(clauses), tuple(names), tuple(coeffs))
