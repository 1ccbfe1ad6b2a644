"""Formula translations down the encoding chain.

``translate_coloured`` rewrites a formula over an edge-coloured graph
with k colours into an equivalent formula over the clique-marker simple
encoding: colour membership becomes clique membership, arcs become their
degree-3 representative nodes, and every variable is guarded so that it
can only stand for (sets of) original nodes or arcs.

``translate_triangulation`` rewrites a formula over a d-dimensional
triangulation into one over its coloured Hasse diagram: face sorts become
guarded node variables, and each subface atom becomes a disjunction over
the label-chains that realise it through the intermediate levels.
"""

from itertools import permutations

from . import mso
from .mso import (And, Not, Quant, Eq, In, Inc, Adj, Col, AdjC, Sub, Lit,
                  conj, disj, exists, forall, NODE, NODESET, ARC, ARCSET,
                  MsoError)
from .hasse import EMPTY_COLOUR, level_colours


class _Gensym:
    def __init__(self, prefix="_g"):
        self.prefix = prefix
        self.n = 0

    def __call__(self):
        self.n += 1
        return "%s%d" % (self.prefix, self.n)


# ---------------------------------------------------------------------------
# edge-coloured -> simple


def _clique_member(x, m, gensym):
    """x lies in a clique on m nodes (x plus m-1 pairwise-adjacent others).

    Quantifiers are nested with their adjacency constraints so that the
    brute-force evaluator prunes a partial tuple as soon as it fails.
    """
    ys = [gensym() for _ in range(m - 1)]

    def build(t):
        parts = [Adj(x, ys[t])]
        for a in range(t):
            parts.append(Not(Eq(ys[a], ys[t])))
            parts.append(Adj(ys[a], ys[t]))
        if t + 1 < len(ys):
            parts.append(build(t + 1))
        return exists(NODE, ys[t], conj(parts))

    return build(0) if ys else Lit(True)


def _in_triangle(x, gensym):
    return _clique_member(x, 3, gensym)


def _is_col(i, x, gensym):
    """x is a node of the colour-i marker clique (size i+2, not i+3)."""
    return And(_clique_member(x, i + 2, gensym),
               Not(_clique_member(x, i + 3, gensym)))


def _is_arc(x, gensym):
    y = gensym()
    return And(Not(_in_triangle(x, gensym)),
               exists(NODE, y, And(Adj(x, y), _in_triangle(y, gensym))))


def _is_node(x, gensym):
    y = gensym()
    return And(Not(_in_triangle(x, gensym)),
               Not(exists(NODE, y, And(Adj(x, y), _in_triangle(y, gensym)))))


def translate_coloured(phi, k, free_vars=()):
    """Equivalent plain-graph formula for the clique-marker encoding.

    free_vars: (name, sort) pairs for the free variables of phi; their
    guards are conjoined in front of the translated body.  Sorts of all
    variables collapse to node/nodeset on the encoded graph.
    """
    gensym = _Gensym()
    # Share helper subformulas per variable name, so the evaluator's
    # memoisation sees one AST node instead of many copies.
    cache = {}

    def cached(key, build):
        if key not in cache:
            cache[key] = build()
        return cache[key]

    def is_node(x):
        return cached(("node", x), lambda: _is_node(x, gensym))

    def is_arc(x):
        return cached(("arc", x), lambda: _is_arc(x, gensym))

    def is_col(i, x):
        return cached(("col", i, x), lambda: _is_col(i, x, gensym))

    def guard(x, sort):
        if sort == NODE:
            return is_node(x)
        if sort == ARC:
            return is_arc(x)
        if sort in (NODESET, ARCSET):
            z = gensym()
            member = is_node(z) if sort == NODESET else is_arc(z)
            return forall(NODE, z, mso.Implies(In(z, x), member))
        raise MsoError("unexpected sort %r in a graph formula" % (sort,))

    def tr(f):
        if isinstance(f, Lit):
            return f
        if isinstance(f, Not):
            return Not(tr(f.sub))
        if isinstance(f, (And, mso.Or, mso.Implies)):
            return type(f)(tr(f.left), tr(f.right))
        if isinstance(f, Quant):
            g = guard(f.var, f.sort)
            new_sort = NODESET if mso.is_set_sort(f.sort) else NODE
            body = tr(f.body)
            if f.kind == "exists":
                return Quant("exists", new_sort, f.var, And(g, body))
            return Quant("forall", new_sort, f.var, mso.Implies(g, body))
        if isinstance(f, (Eq, In)):
            return f
        if isinstance(f, Inc):
            return conj([is_arc(f.e), is_node(f.v), Adj(f.e, f.v)])
        if isinstance(f, Col):
            v = gensym()
            i = int(f.colour)
            return And(is_arc(f.e),
                       exists(NODE, v, And(is_col(i, v), Adj(f.e, v))))
        if isinstance(f, Adj):
            e = gensym()
            return conj([is_node(f.u), is_node(f.v), Not(Eq(f.u, f.v)),
                         exists(NODE, e, conj([is_arc(e),
                                               Adj(f.u, e), Adj(f.v, e)]))])
        if isinstance(f, AdjC):
            e = gensym()
            v2 = gensym()
            i = int(f.colour)
            return conj([is_node(f.u), is_node(f.v), Not(Eq(f.u, f.v)),
                         exists(NODE, e, conj([
                             is_arc(e), Adj(f.u, e), Adj(f.v, e),
                             exists(NODE, v2, And(is_col(i, v2),
                                                  Adj(e, v2)))]))])
        if isinstance(f, Sub):
            raise MsoError("subface atom in a graph formula")
        raise MsoError("unknown AST node %r" % (f,))

    out = tr(phi)
    guards = [guard(name, sort) for name, sort in free_vars]
    return conj(guards + [out])


def encoded_assignment(enc, assignment, free_vars):
    """Carry an assignment on the original graph over to the encoding.

    Element values map to their image / arc-representative nodes; sets map
    elementwise.
    """
    image = {}
    for n, o in enc.origin.items():
        if o[0] in ("node", "arc"):
            image[o[1]] = n
    out = {}
    sorts = dict(free_vars)
    for name, val in assignment.items():
        if mso.is_set_sort(sorts[name]):
            out[name] = frozenset(image[x] for x in val)
        else:
            out[name] = image[val]
    return out


# ---------------------------------------------------------------------------
# triangulation -> coloured Hasse diagram


def _has_arc_coloured(x, colours, gensym):
    """x is incident with an arc of one of the given colours."""
    y = gensym()
    return exists(NODE, y, disj([AdjC(c, x, y) for c in colours]))


def _is_face(i, d, x, gensym):
    if i == 0:
        return And(_has_arc_coloured(x, [EMPTY_COLOUR], gensym),
                   _has_arc_coloured(x, level_colours(0), gensym))
    if i < d:
        return And(_has_arc_coloured(x, level_colours(i - 1), gensym),
                   _has_arc_coloured(x, level_colours(i), gensym))
    # Top level: has an up-colour arc from below, and no arc of the colour
    # family one level further down (for d = 1 that family is the empty
    # colour, which plays the role of the missing length-0 colours).
    below = level_colours(d - 2) if d >= 2 else [EMPTY_COLOUR]
    return And(_has_arc_coloured(x, level_colours(d - 1), gensym),
               Not(_has_arc_coloured(x, below, gensym)))




def _chain_colours(i, pi, j):
    """All colour chains (c_{i+1}, ..., c_j) realising the subface map pi.

    The intermediate face at level t is pinned to the canonical label set
    B_t (the image of pi grown by the least unused label); only its
    internal labelling lambda_t varies.  The chain colours are
    lambda_t^{-1} o lambda_{t-1}, which telescope to pi.
    """
    sets = {i: sorted(pi)}
    for t in range(i + 1, j + 1):
        prev = sets[t - 1]
        nxt = min(x for x in range(j + 1) if x not in prev)
        sets[t] = sorted(prev + [nxt])
    lambdas = {i: [tuple(pi)], j: [tuple(range(j + 1))]}
    for t in range(i + 1, j):
        lambdas[t] = [p for p in permutations(sets[t])]
    chains = []

    def rec(t, prev_lambda, acc):
        if t > j:
            chains.append(tuple(acc))
            return
        for lam in lambdas[t]:
            inv = {v: pos for pos, v in enumerate(lam)}
            colour = "".join(str(inv[v]) for v in prev_lambda)
            rec(t + 1, lam, acc + [colour])

    rec(i + 1, tuple(pi), [])
    return chains


def expand_subface_relation(i, pi, d, fvar="f", svar="s", gensym=None):
    """Chain-disjunction fragment for the subface atom f <=_pi s at level d.

    pi has length i+1 with distinct values in 0..d and i < d.  The
    fragment quantifies over intermediate faces at levels i+1 .. d-1.
    """
    pi = tuple(pi)
    if len(pi) != i + 1 or len(set(pi)) != len(pi) \
            or any(not 0 <= p <= d for p in pi) or not i < d:
        raise MsoError("invalid subface labels %r for levels %d < %d"
                       % (pi, i, d))
    gensym = gensym or _Gensym()
    mids = [gensym() for _ in range(d - 1 - i)]
    disjuncts = []
    for chain in _chain_colours(i, pi, d):
        nodes = [fvar] + mids + [svar]
        atoms = [AdjC(c, a, b) for c, a, b in zip(chain, nodes, nodes[1:])]
        disjuncts.append(conj(atoms))
    body = disj(disjuncts)
    for m in reversed(mids):
        body = exists(NODE, m, body)
    return body


def translate_triangulation(phi, d, free_vars=()):
    """Equivalent coloured-graph formula for the coloured Hasse diagram."""
    gensym = _Gensym()
    cache = {}

    def is_face(i, x):
        key = (i, x)
        if key not in cache:
            cache[key] = _is_face(i, d, x, gensym)
        return cache[key]

    def guard(x, sort):
        if sort[0] == "face":
            return is_face(sort[1], x)
        if sort[0] == "faceset":
            z = gensym()
            return forall(NODE, z, mso.Implies(In(z, x), is_face(sort[1], z)))
        raise MsoError("unexpected sort %r in a triangulation formula"
                       % (sort,))

    def tr(f, env):
        if isinstance(f, Lit):
            return f
        if isinstance(f, Not):
            return Not(tr(f.sub, env))
        if isinstance(f, (And, mso.Or, mso.Implies)):
            return type(f)(tr(f.left, env), tr(f.right, env))
        if isinstance(f, Quant):
            g = guard(f.var, f.sort)
            new_sort = NODESET if mso.is_set_sort(f.sort) else NODE
            body = tr(f.body, {**env, f.var: f.sort})
            if f.kind == "exists":
                return Quant("exists", new_sort, f.var, And(g, body))
            return Quant("forall", new_sort, f.var, mso.Implies(g, body))
        if isinstance(f, (Eq, In)):
            return f
        if isinstance(f, Sub):
            i = len(f.pi) - 1
            sort = env.get(f.s)
            if sort is None or sort[0] != "face":
                raise MsoError("cannot determine the level of %r" % f.s)
            j = sort[1]
            if j == i + 1:
                chain = AdjC("".join(str(p) for p in f.pi), f.f, f.s)
            else:
                chain = expand_subface_relation(i, f.pi, j, f.f, f.s, gensym)
            return conj([is_face(i, f.f), is_face(j, f.s), chain])
        raise MsoError("graph atom %r in a triangulation formula" % (f,))

    out = tr(phi, dict(free_vars))
    guards = [guard(name, sort) for name, sort in free_vars]
    return conj(guards + [out])


def hasse_assignment(h, assignment, free_vars):
    """Carry a triangulation assignment over to Hasse-diagram node ids."""
    node_of = {fo: n for n, fo in h.face_of.items() if fo is not None}
    sorts = dict(free_vars)
    out = {}
    for name, val in assignment.items():
        if mso.is_set_sort(sorts[name]):
            out[name] = frozenset(node_of[x] for x in val)
        else:
            out[name] = node_of[val]
    return out
