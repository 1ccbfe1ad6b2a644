"""Turaev-Viro state sums on closed 3-dimensional triangulations.

Edges are coloured from I = {0, 1/2, ..., (r-2)/2}; a colouring is
admissible when every 2-face sees an integral, triangle-bounded colour
triple capped at r-2.  The invariant sums, over admissible colourings,
the product of a vertex constant alpha, edge constants beta, and
tetrahedron constants gamma indexed by the six edge colours in the order
01, 02, 12, 23, 13, 03.

The constants are supplied as data tables; a unit table (all weights 1)
turns every backend into an exact admissible-colouring counter.
Half-integers are stored as doubled integers 0..r-2 throughout.
"""

import json
from dataclasses import dataclass
from itertools import product

from . import mso
from .mso import conj, disj, forall, And, Or, Not, In, Sub, Implies
from .treedecomp import validate_decomposition
from .triangulation import dual_graph

# gamma subscript order: vertex pairs of the six tetrahedron edges
GAMMA_ORDER = ((0, 1), (0, 2), (1, 2), (2, 3), (1, 3), (0, 3))

# the four 2-faces of a tetrahedron as positions into GAMMA_ORDER
FACE_TRIADS = ((0, 1, 2), (0, 4, 5), (1, 3, 5), (2, 3, 4))


class TvError(ValueError):
    pass


def colour_range(r):
    """The doubled half-integers 0..r-2."""
    if r < 3:
        raise TvError("r must be at least 3")
    return list(range(r - 1))


def tv_admissible(r, triple):
    """Admissibility of a colour triple, in doubled-integer convention."""
    i, j, k = triple
    for x in (i, j, k):
        if x not in range(r - 1):
            raise TvError("colour %r outside I for r=%d" % (x, r))
    return ((i + j + k) % 2 == 0
            and i <= j + k and j <= i + k and k <= i + j
            and i + j + k <= 2 * (r - 2))


def admissible_sextuples(r):
    """All gamma index tuples whose four face triads are admissible."""
    out = []
    for t in product(colour_range(r), repeat=6):
        if all(tv_admissible(r, tuple(t[p] for p in triad))
               for triad in FACE_TRIADS):
            out.append(t)
    return out


@dataclass(frozen=True)
class TvConstantTable:
    r: int
    q0: complex
    alpha: complex
    beta: dict     # doubled colour -> value
    gamma: dict    # sextuple of doubled colours -> value

    def __post_init__(self):
        for c in colour_range(self.r):
            if c not in self.beta:
                raise TvError("beta missing colour %d/2" % c)
        for t in admissible_sextuples(self.r):
            if t not in self.gamma:
                raise TvError("gamma missing %r" % (t,))


def unit_table(r):
    """All-ones table: state sums become exact admissible-colouring counts."""
    return TvConstantTable(r, 1, 1,
                           {c: 1 for c in colour_range(r)},
                           {t: 1 for t in admissible_sextuples(r)})


def _half_str(c):
    return str(c // 2) if c % 2 == 0 else "%d/2" % c


def _parse_half(s):
    s = s.strip()
    if "/" in s:
        num, den = s.split("/")
        if den.strip() != "2":
            raise TvError("bad half-integer %r" % s)
        return int(num)
    return 2 * int(s)


def load_tv_table(text):
    """Parse the JSON table format; validates completeness."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TvError("malformed table JSON: %s" % exc)

    def cplx(v):
        if not (isinstance(v, list) and len(v) == 2):
            raise TvError("complex values are [re, im] pairs, got %r" % (v,))
        return complex(v[0], v[1])

    try:
        r = int(doc["r"])
        q0 = cplx(doc["q0"])
        alpha = cplx(doc["alpha"])
        beta = {_parse_half(k): cplx(v) for k, v in doc["beta"].items()}
        gamma = {tuple(_parse_half(p) for p in k.split(",")): cplx(v)
                 for k, v in doc["gamma"].items()}
    except KeyError as exc:
        raise TvError("table missing field %s" % exc)
    return TvConstantTable(r, q0, alpha, beta, gamma)


def table_to_json(table):
    def pair(z):
        z = complex(z)
        return [z.real, z.imag]

    doc = {
        "r": table.r,
        "q0": pair(table.q0),
        "alpha": pair(table.alpha),
        "beta": {_half_str(c): pair(v) for c, v in sorted(table.beta.items())},
        "gamma": {",".join(_half_str(c) for c in t): pair(v)
                  for t, v in sorted(table.gamma.items())},
    }
    return json.dumps(doc, indent=2)


# ---------------------------------------------------------------------------
# state-sum backends


def _edge_at(sk, s, a, b):
    """Edge id of the triangulation edge at vertices {a, b} of simplex s."""
    eid = sk.face_at(1, s, (a, b))
    if eid is None:
        eid = sk.face_at(1, s, (b, a))
    if eid is None:
        raise TvError("no edge at vertices (%d, %d) of simplex %d" % (a, b, s))
    return eid


def _tet_edges(sk, s):
    """Edge ids of simplex s in gamma subscript order."""
    return tuple(_edge_at(sk, s, a, b) for a, b in GAMMA_ORDER)


def _require_closed(t):
    if t.dim != 3:
        raise TvError("state sums need dimension 3")
    if not t.is_closed():
        raise TvError("triangulation has boundary facets")


def tv_bruteforce(t, sk, r, table):
    """Direct sum over all admissible colourings."""
    _require_closed(t)
    if table.r != r:
        raise TvError("table is for r=%d, not %d" % (table.r, r))
    if t.n == 0:
        return 1 * table.alpha ** 0
    edges = [e.id for e in sk.faces[1]]
    tets = [_tet_edges(sk, s) for s in range(t.n)]
    nv = len(sk.faces[0])
    total = 0
    for colours in product(colour_range(r), repeat=len(edges)):
        theta = dict(zip(edges, colours))
        ok = True
        for te in tets:
            for triad in FACE_TRIADS:
                if not tv_admissible(r, tuple(theta[te[p]] for p in triad)):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        value = table.alpha ** nv
        for e in edges:
            value = value * table.beta[theta[e]]
        for te in tets:
            value = value * table.gamma[tuple(theta[e] for e in te)]
        total = total + value
    return total


def tv_dp(t, sk, r, table, td):
    """State sum via dynamic programming over a dual-graph decomposition.

    States are colourings of the edges incident to the current bag's
    tetrahedra; the gamma factor of a tetrahedron is multiplied in when
    it is forgotten, the beta factor of an edge when its last incident
    tetrahedron leaves the bags (sound for the same connectivity reason
    as the angle-structure DP), and alpha once globally at the end.
    """
    _require_closed(t)
    if table.r != r:
        raise TvError("table is for r=%d, not %d" % (table.r, r))
    if t.n == 0:
        return 1 * table.alpha ** 0
    ok, report = validate_decomposition(dual_graph(t), td)
    if not ok:
        raise TvError("invalid decomposition: %r" % (report,))
    tet_edges = {s: _tet_edges(sk, s) for s in range(t.n)}
    colours = colour_range(r)

    from .taut import _rooted_postorder
    root, parent, order = _rooted_postorder(td)
    children = {x: [] for x in td.tree_nodes}
    for x in td.tree_nodes:
        if parent[x] is not None:
            children[parent[x]].append(x)

    def admissible_tet(theta, s):
        te = tet_edges[s]
        return all(tv_admissible(r, tuple(theta[te[p]] for p in triad))
                   for triad in FACE_TRIADS)

    def introduce(states, new_tets, bag):
        """Extend states with colours for the new tetrahedra's fresh edges."""
        for s in sorted(new_tets):
            nxt = {}
            for theta, val in states.items():
                theta = dict(theta)
                fresh = sorted(set(e for e in tet_edges[s] if e not in theta))
                for combo in product(colours, repeat=len(fresh)):
                    full = {**theta, **dict(zip(fresh, combo))}
                    if admissible_tet(full, s):
                        key = frozenset(full.items())
                        nxt[key] = nxt.get(key, 0) + val
            states = nxt
        return states

    def project(states, old_bag, new_bag):
        """Forget tetrahedra leaving the bag, fold in their gamma, then
        drop (and beta-weight) edges no longer incident to the bag."""
        gone = old_bag - new_bag
        live_edges = set(e for s in new_bag for e in tet_edges[s])
        out = {}
        for theta, val in states.items():
            theta = dict(theta)
            for s in sorted(gone):
                val = val * table.gamma[tuple(theta[e] for e in tet_edges[s])]
            kept = {}
            for e, c in theta.items():
                if e in live_edges:
                    kept[e] = c
                else:
                    val = val * table.beta[c]
            key = frozenset(kept.items())
            out[key] = out.get(key, 0) + val
        return out

    table_by_node = {}
    for x in order:
        bag = set(td.bags[x])
        if not children[x]:
            states = introduce({frozenset(): 1}, bag, bag)
        else:
            states = None
            for ch in sorted(children[x]):
                conv = project(table_by_node.pop(ch), set(td.bags[ch]), bag)
                if states is None:
                    states = conv
                else:
                    joined = {}
                    for th1, v1 in states.items():
                        d1 = dict(th1)
                        for th2, v2 in conv.items():
                            d2 = dict(th2)
                            if any(d1.get(e) != c for e, c in d2.items()
                                   if e in d1):
                                continue
                            key = frozenset({**d1, **d2}.items())
                            joined[key] = joined.get(key, 0) + v1 * v2
                    states = joined
            # Introduce bag tetrahedra with edges still uncoloured and
            # re-check admissibility of every bag tetrahedron.
            states = introduce(states, bag, bag)
        table_by_node[x] = states

    final = project(table_by_node[root], set(td.bags[root]), set())
    total = 0
    for theta, val in sorted(final.items()):
        total = total + val
    return total * table.alpha ** len(sk.faces[0])


# ---------------------------------------------------------------------------
# evaluation-problem encoding


def _e_name(c):
    return "E%d" % c


def _s_name(x):
    return "S_" + "_".join(str(c) for c in x)


def tv_problem(t, sk, r, table):
    """The state sum as a multiplicative evaluation problem.

    Free sets over the dimension-3 triangulation signature: V (forced to
    hold every vertex, weighted alpha each), one edge set per colour
    (partitioning the edges, weighted beta), and one tetrahedron set per
    admissible colour sextuple (partitioning the tetrahedra, weighted
    gamma).  Consistency clauses tie a tetrahedron's set membership to
    the colours of its six edges, so satisfying assignments correspond
    exactly to admissible colourings.
    """
    _require_closed(t)
    if table.r != r:
        raise TvError("table is for r=%d, not %d" % (table.r, r))
    sextuples = admissible_sextuples(r)
    names = [("V", mso.faceset_sort(0))]
    names += [(_e_name(c), mso.faceset_sort(1)) for c in colour_range(r)]
    names += [(_s_name(x), mso.faceset_sort(3)) for x in sextuples]

    v0, e1, s3 = mso.face_sort(0), mso.face_sort(1), mso.face_sort(3)
    clauses = [forall(v0, "v", In("v", "V"))]
    e_names = [_e_name(c) for c in colour_range(r)]
    clauses.append(forall(e1, "e", disj([In("e", X) for X in e_names])))
    for a in range(len(e_names)):
        for b in range(a + 1, len(e_names)):
            clauses.append(forall(e1, "e", Not(
                And(In("e", e_names[a]), In("e", e_names[b])))))
    s_names = [_s_name(x) for x in sextuples]
    clauses.append(forall(s3, "s", disj([In("s", X) for X in s_names])))
    for a in range(len(s_names)):
        for b in range(a + 1, len(s_names)):
            clauses.append(forall(s3, "s", Not(
                And(In("s", s_names[a]), In("s", s_names[b])))))
    # Membership in S_x forces each edge position to carry x's colour.
    for x in sextuples:
        for pos, (i, j) in enumerate(GAMMA_ORDER):
            occ = Or(Sub((i, j), "e", "s"), Sub((j, i), "e", "s"))
            clauses.append(forall(s3, "s", forall(e1, "e", Implies(
                And(In("s", _s_name(x)), occ),
                In("e", _e_name(x[pos]))))))

    weights = [{el: table.alpha for el in sk_carrier(sk, 0)}]
    for c in colour_range(r):
        weights.append({el: table.beta[c] for el in sk_carrier(sk, 1)})
    for x in sextuples:
        weights.append({el: table.gamma[x] for el in sk_carrier(sk, 3)})
    return mso.EvaluationProblem(conj(clauses), tuple(names),
                                 "multiplicative", tuple(weights))


def sk_carrier(sk, i):
    return [(i, f.id) for f in sk.faces[i]]

