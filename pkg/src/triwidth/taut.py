"""Taut angle structures on 3-dimensional triangulations.

Each tetrahedron picks one of three types, assigning the dihedral angle
pi to one opposite pair of edges ((01,23), (02,13) or (03,12)) and 0 to
the rest.  The structure is taut when the angles around every edge class
sum to exactly 2*pi, counting one contribution per distinct
(tetrahedron, unordered vertex pair) slot of the edge.

Backends: exhaustive search over the 3^n assignments, a dynamic program
over a tree decomposition of the dual graph, and an emitted second-order
sentence over the triangulation signature.
"""

from itertools import product

from . import mso
from .mso import conj, disj, exists, forall, And, Or, Not, Eq, In, Sub
from .treedecomp import validate_decomposition
from .triangulation import dual_graph

# Type c assigns angle pi to these two opposite vertex pairs.
TYPE_PAIRS = {
    1: (frozenset({0, 1}), frozenset({2, 3})),
    2: (frozenset({0, 2}), frozenset({1, 3})),
    3: (frozenset({0, 3}), frozenset({1, 2})),
}


class TautError(ValueError):
    pass


def _edge_slots(sk):
    """Per edge id: its distinct (tetrahedron, vertex pair) slots."""
    slots = {}
    for e in sk.faces[1]:
        slots[e.id] = sorted({(s, frozenset(emb)) for s, emb in e.instances},
                             key=lambda x: (x[0], sorted(x[1])))
    return slots


def _contribution(slots, choice_of):
    """Angle count (in units of pi) per edge under a full assignment."""
    out = {}
    for eid, sl in slots.items():
        out[eid] = sum(1 for s, pair in sl if pair in TYPE_PAIRS[choice_of[s]])
    return out


def is_taut(t, sk, choices):
    """Does the per-tetrahedron type assignment satisfy every edge?"""
    slots = _edge_slots(sk)
    counts = _contribution(slots, dict(enumerate(choices)))
    return all(c == 2 for c in counts.values())


def taut_bruteforce(t, sk):
    """First taut assignment in lexicographic order, or None."""
    if t.dim != 3:
        raise TautError("taut structures need dimension 3")
    if t.n == 0:
        return ()
    slots = _edge_slots(sk)
    for choices in product((1, 2, 3), repeat=t.n):
        choice_of = dict(enumerate(choices))
        if all(sum(1 for s, p in sl if p in TYPE_PAIRS[choice_of[s]]) == 2
               for sl in slots.values()):
            return choices
    return None


def _tet_edge_pairs(sk):
    """Per tetrahedron: list of (edge id, vertex pair) slots it carries."""
    out = {}
    for eid, sl in _edge_slots(sk).items():
        for s, pair in sl:
            out.setdefault(s, []).append((eid, pair))
    return out


def _rooted_postorder(td):
    root = min(td.tree_nodes)
    parent = {root: None}
    order = []
    stack = [root]
    while stack:
        x = stack.pop()
        order.append(x)
        for y in td.link_neighbours(x):
            if y not in parent:
                parent[y] = x
                stack.append(y)
    order.reverse()
    return root, parent, order


def taut_dp(t, sk, td):
    """Tree-decomposition dynamic program; agrees with taut_bruteforce.

    States pair the type choices of the bag tetrahedra with the angle
    counts contributed by already-forgotten tetrahedra, per edge that is
    still alive.  An edge is finalised (its total must reach exactly 2)
    as soon as no bag tetrahedron touches it any more; this is sound
    because the tetrahedra around an edge induce a connected piece of the
    dual graph, so their occurrences cannot resurface past that bag.
    """
    if t.dim != 3:
        raise TautError("taut structures need dimension 3")
    if t.n == 0:
        return ()
    ok, report = validate_decomposition(dual_graph(t), td)
    if not ok:
        raise TautError("invalid decomposition: %r" % (report,))
    tet_slots = _tet_edge_pairs(sk)
    edge_tets = {}
    for s, sl in tet_slots.items():
        for eid, _ in sl:
            edge_tets.setdefault(eid, set()).add(s)
    root, parent, order = _rooted_postorder(td)

    def contrib(s, choice, eid):
        pairs = TYPE_PAIRS[choice]
        return sum(1 for e2, p in tet_slots.get(s, ()) if e2 == eid and p in pairs)

    def assignments(tets):
        tets = sorted(tets)
        for cs in product((1, 2, 3), repeat=len(tets)):
            yield tuple(zip(tets, cs))

    # table[tree node] = {(bag choices, live counts): witness dict}
    table = {}
    children = {x: [] for x in td.tree_nodes}
    for x in td.tree_nodes:
        if parent[x] is not None:
            children[parent[x]].append(x)

    def finalise(choices, counts, bag):
        """Close out edges no longer touched by the bag; None kills."""
        out = {}
        for eid, c in counts:
            if edge_tets[eid] & bag:
                if c > 2:
                    return None
                out[eid] = c
            elif c != 2:
                return None
        return frozenset(out.items())

    for x in order:
        bag = set(td.bags[x])
        merged = {}
        if not children[x]:
            for choice in assignments(bag):
                merged[(choice, frozenset())] = dict(choice)
        else:
            # Fold children one at a time into states for this bag.
            partial = None
            for ch in sorted(children[x]):
                converted = {}
                for (choices, counts), wit in sorted(table.pop(ch).items()):
                    keep = tuple((s, c) for s, c in choices if s in bag)
                    drop = [(s, c) for s, c in choices if s not in bag]
                    new_counts = dict(counts)
                    for s, c in drop:
                        for eid, pair in tet_slots.get(s, ()):
                            new_counts[eid] = new_counts.get(eid, 0) \
                                + (1 if pair in TYPE_PAIRS[c] else 0)
                    fc = finalise(keep, tuple(new_counts.items()), bag)
                    if fc is None:
                        continue
                    key = (keep, fc)
                    if key not in converted:
                        converted[key] = wit
                if partial is None:
                    partial = converted
                else:
                    joined = {}
                    for (ch1, cnt1), w1 in sorted(partial.items()):
                        for (ch2, cnt2), w2 in sorted(converted.items()):
                            if ch1 != ch2:
                                continue
                            summed = dict(cnt1)
                            for eid, c in cnt2:
                                summed[eid] = summed.get(eid, 0) + c
                            fc = finalise(ch1, tuple(summed.items()), bag)
                            if fc is None:
                                continue
                            key = (ch1, fc)
                            if key not in joined:
                                joined[key] = {**w1, **w2}
                    partial = joined
            # Introduce tetrahedra present in this bag but in no child state.
            for (choices, counts), wit in sorted(partial.items()):
                seen = {s for s, _ in choices}
                missing = sorted(bag - seen)
                for extra in assignments(missing):
                    full = tuple(sorted(choices + extra))
                    key = (full, counts)
                    if key not in merged:
                        merged[key] = {**wit, **dict(extra)}
        table[x] = merged

    # Forget the root bag entirely.
    for (choices, counts), wit in sorted(table[root].items()):
        new_counts = dict(counts)
        for s, c in choices:
            for eid, pair in tet_slots.get(s, ()):
                new_counts[eid] = new_counts.get(eid, 0) \
                    + (1 if pair in TYPE_PAIRS[c] else 0)
        if all(c == 2 for c in new_counts.values()):
            full = {**wit, **dict(choices)}
            return tuple(full[s] for s in range(t.n))
    return None


# ---------------------------------------------------------------------------
# second-order sentence


def _occ(pair, e, s):
    a, b = sorted(pair)
    return Or(Sub((a, b), e, s), Sub((b, a), e, s))


def taut_sentence():
    """Sentence over the d=3 triangulation signature: a taut structure
    exists.  Tetrahedron types become a partition into three sets; the
    2*pi edge condition becomes "one tetrahedron contributes both pi
    angles, or two distinct tetrahedra contribute one each, and every
    other slot contributes none"."""
    T = ["T1", "T2", "T3"]
    tet = mso.face_sort(3)
    tset = mso.faceset_sort(3)

    def cnt(e, s, want):
        """Tetrahedron s contributes exactly `want` pi-angles to edge e."""
        cases = []
        for c in (1, 2, 3):
            p, q = TYPE_PAIRS[c]
            op, oq = _occ(p, e, s), _occ(q, e, s)
            if want == 2:
                got = And(op, oq)
            elif want == 1:
                got = Or(And(op, Not(oq)), And(Not(op), oq))
            else:
                got = And(Not(op), Not(oq))
            cases.append(And(In(s, T[c - 1]), got))
        return disj(cases)

    partition = forall(tet, "s", conj(
        [disj([In("s", X) for X in T])]
        + [Not(And(In("s", X), In("s", Y)))
           for X, Y in (("T1", "T2"), ("T1", "T3"), ("T2", "T3"))]))

    one_double = exists(tet, "s", And(
        cnt("e", "s", 2),
        forall(tet, "s2", mso.Implies(Not(Eq("s2", "s")), cnt("e", "s2", 0)))))
    two_singles = exists(tet, "s", exists(tet, "s2", conj([
        Not(Eq("s", "s2")), cnt("e", "s", 1), cnt("e", "s2", 1),
        forall(tet, "s3",
               mso.Implies(And(Not(Eq("s3", "s")), Not(Eq("s3", "s2"))),
                           cnt("e", "s3", 0)))])))
    edge_cond = forall(mso.face_sort(1), "e", Or(one_double, two_singles))

    # Check disjointness of the first two sets before the third is even
    # enumerated; this prunes most of the search done by the brute-force
    # evaluator without changing the meaning.
    disj12 = forall(tet, "s", Not(And(In("s", "T1"), In("s", "T2"))))
    body = exists(tset, "T3", And(partition, edge_cond))
    return exists(tset, "T1", exists(tset, "T2", And(disj12, body)))
