"""Monadic second-order formulas over graphs and triangulations.

Two signatures share one AST:

* graph signature — element sorts ``node`` and ``arc``, set sorts
  ``nodeset`` and ``arcset``; atoms =, in, inc(e,v), adj(u,v), col_I(e)
  and adjc_I(u,v) (the coloured atoms only on edge-coloured graphs);
* triangulation signature — sorts ``face i`` / ``faceset i`` for each
  dimension i, atoms =, in and the subface relation sub_pi(f, s).

Concrete syntax is parenthesized prefix notation, e.g.
``(forall node v (exists node w (adj v w)))``.  Semantics is the obvious
brute-force one: quantifiers enumerate their full carrier (all elements,
or all subsets for set sorts), deterministically ordered.  The extremum
and evaluation solvers below search assignments of the free set
variables by backtracking, pruning with a three-valued partial
evaluation that is monotone under refinement of the assignment.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations


class MsoError(ValueError):
    pass


class SortError(MsoError):
    pass


class BudgetError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# sorts

NODE = ("node",)
ARC = ("arc",)
NODESET = ("nodeset",)
ARCSET = ("arcset",)


def face_sort(i):
    return ("face", i)


def faceset_sort(i):
    return ("faceset", i)


def is_set_sort(sort):
    return sort[0] in ("nodeset", "arcset", "faceset")


def element_sort_of(set_sort):
    kind = set_sort[0]
    if kind == "nodeset":
        return NODE
    if kind == "arcset":
        return ARC
    if kind == "faceset":
        return face_sort(set_sort[1])
    raise SortError("not a set sort: %r" % (set_sort,))


def sort_to_text(sort):
    if sort[0] in ("face", "faceset"):
        return "%s %d" % (sort[0], sort[1])
    return sort[0]


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class Lit(Formula):
    value: bool


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Quant(Formula):
    kind: str          # "forall" | "exists"
    sort: tuple
    var: str
    body: Formula


@dataclass(frozen=True)
class Eq(Formula):
    x: str
    y: str


@dataclass(frozen=True)
class In(Formula):
    x: str
    X: str


@dataclass(frozen=True)
class Inc(Formula):
    e: str
    v: str


@dataclass(frozen=True)
class Adj(Formula):
    u: str
    v: str


@dataclass(frozen=True)
class Col(Formula):
    colour: str
    e: str


@dataclass(frozen=True)
class AdjC(Formula):
    colour: str
    u: str
    v: str


@dataclass(frozen=True)
class Sub(Formula):
    pi: tuple          # label sequence, length = dim f + 1
    f: str
    s: str


TRUE = Lit(True)
FALSE = Lit(False)


def conj(parts):
    """Right-fold a list into nested binary conjunctions."""
    parts = list(parts)
    if not parts:
        return TRUE
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def disj(parts):
    parts = list(parts)
    if not parts:
        return FALSE
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Or(p, out)
    return out


def exists(sort, var, body):
    return Quant("exists", sort, var, body)


def forall(sort, var, body):
    return Quant("forall", sort, var, body)


# ---------------------------------------------------------------------------
# printing


def formula_to_text(f):
    if isinstance(f, Lit):
        return "true" if f.value else "false"
    if isinstance(f, Not):
        return "(not %s)" % formula_to_text(f.sub)
    if isinstance(f, And):
        return "(and %s %s)" % (formula_to_text(f.left), formula_to_text(f.right))
    if isinstance(f, Or):
        return "(or %s %s)" % (formula_to_text(f.left), formula_to_text(f.right))
    if isinstance(f, Implies):
        return "(implies %s %s)" % (formula_to_text(f.left),
                                    formula_to_text(f.right))
    if isinstance(f, Quant):
        return "(%s %s %s %s)" % (f.kind, sort_to_text(f.sort), f.var,
                                  formula_to_text(f.body))
    if isinstance(f, Eq):
        return "(= %s %s)" % (f.x, f.y)
    if isinstance(f, In):
        return "(in %s %s)" % (f.x, f.X)
    if isinstance(f, Inc):
        return "(inc %s %s)" % (f.e, f.v)
    if isinstance(f, Adj):
        return "(adj %s %s)" % (f.u, f.v)
    if isinstance(f, Col):
        return "(col %s %s)" % (f.colour, f.e)
    if isinstance(f, AdjC):
        return "(adjc %s %s %s)" % (f.colour, f.u, f.v)
    if isinstance(f, Sub):
        return "(sub %s %s %s)" % ("".join(str(p) for p in f.pi), f.f, f.s)
    raise MsoError("unknown AST node %r" % (f,))


# ---------------------------------------------------------------------------
# parsing


def _tokens(text):
    """Tokens with positions; parens are their own tokens."""
    toks = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            toks.append((ch, i))
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()":
                j += 1
            toks.append((text[i:j], i))
            i = j
    return toks


_SORT_WORDS = {"node": NODE, "arc": ARC, "nodeset": NODESET, "arcset": ARCSET}


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def error(self, msg):
        pos = self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)
        raise MsoError("syntax error at position %d: %s" % (pos, msg))

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self):
        if self.i >= len(self.toks):
            self.error("unexpected end of input")
        tok = self.toks[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok):
        got = self.take()
        if got != tok:
            self.i -= 1
            self.error("expected %r, got %r" % (tok, got))

    def sort(self):
        tok = self.take()
        if tok in _SORT_WORDS:
            return _SORT_WORDS[tok]
        if tok in ("face", "faceset"):
            level = self.take()
            if not level.isdigit():
                self.error("face sort needs an integer level")
            return (tok, int(level))
        self.i -= 1
        self.error("unknown sort %r" % tok)

    def formula(self):
        tok = self.take()
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        if tok != "(":
            self.i -= 1
            self.error("expected '(' or literal, got %r" % tok)
        head = self.take()
        if head == "not":
            out = Not(self.formula())
        elif head in ("and", "or", "implies"):
            cls = {"and": And, "or": Or, "implies": Implies}[head]
            out = cls(self.formula(), self.formula())
        elif head in ("forall", "exists"):
            sort = self.sort()
            var = self.take()
            out = Quant(head, sort, var, self.formula())
        elif head == "=":
            out = Eq(self.take(), self.take())
        elif head == "in":
            out = In(self.take(), self.take())
        elif head == "inc":
            out = Inc(self.take(), self.take())
        elif head == "adj":
            out = Adj(self.take(), self.take())
        elif head == "col":
            out = Col(self.take(), self.take())
        elif head == "adjc":
            out = AdjC(self.take(), self.take(), self.take())
        elif head == "sub":
            pi = self.take()
            if not pi.isdigit():
                self.error("subface labels must be a digit string")
            out = Sub(tuple(int(c) for c in pi), self.take(), self.take())
        else:
            self.i -= 1
            self.error("unknown operator %r" % head)
        self.expect(")")
        return out


def parse_formula(text, signature=None, free_vars=None):
    """Parse concrete syntax; sort-check when a signature is given.

    signature: ("graph", k) for edge-coloured graphs with k colours
    (k = 0 for plain simple graphs), ("hasse", d) for coloured Hasse
    diagrams, or ("tri", d) for the triangulation signature.
    free_vars: optional list of (name, sort) declarations.
    """
    p = _Parser(text)
    f = p.formula()
    if p.i != len(p.toks):
        p.error("trailing input")
    if signature is not None:
        check_sorts(f, signature, dict(free_vars or ()))
    return f


def _valid_colours(signature):
    if signature[0] == "graph":
        return {str(i) for i in range(1, signature[1] + 1)}
    if signature[0] == "hasse":
        from .hasse import hasse_colours
        return set(hasse_colours(signature[1]))
    return set()


def check_sorts(f, signature, env):
    """Raise SortError unless f is well-sorted; env maps free vars to sorts."""
    colours = _valid_colours(signature)
    tri = signature[0] == "tri"
    d = signature[1] if tri else None

    def var_sort(x):
        if x not in env:
            raise SortError("undeclared variable %r in %s"
                            % (x, formula_to_text(f)))
        return env[x]

    def walk(node, env):
        if isinstance(node, Lit):
            return
        if isinstance(node, Not):
            walk(node.sub, env)
        elif isinstance(node, (And, Or, Implies)):
            walk(node.left, env)
            walk(node.right, env)
        elif isinstance(node, Quant):
            s = node.sort
            if tri:
                if s[0] not in ("face", "faceset") or not 0 <= s[1] <= d:
                    raise SortError("sort %r not in the triangulation signature"
                                    % (s,))
            else:
                if s[0] in ("face", "faceset"):
                    raise SortError("face sorts only in the triangulation "
                                    "signature")
            walk(node.body, {**env, node.var: s})
        elif isinstance(node, Eq):
            sx, sy = _lookup(node.x, env), _lookup(node.y, env)
            if sx != sy:
                raise SortError("equality between sorts %r and %r" % (sx, sy))
        elif isinstance(node, In):
            sx, sX = _lookup(node.x, env), _lookup(node.X, env)
            if not is_set_sort(sX) or element_sort_of(sX) != sx:
                raise SortError("(in %s %s): sorts %r, %r"
                                % (node.x, node.X, sx, sX))
        elif isinstance(node, Inc):
            _expect_sort(node.e, ARC, env)
            _expect_sort(node.v, NODE, env)
        elif isinstance(node, Adj):
            _expect_sort(node.u, NODE, env)
            _expect_sort(node.v, NODE, env)
        elif isinstance(node, Col):
            if node.colour not in colours:
                raise SortError("unknown colour %r" % node.colour)
            _expect_sort(node.e, ARC, env)
        elif isinstance(node, AdjC):
            if node.colour not in colours:
                raise SortError("unknown colour %r" % node.colour)
            _expect_sort(node.u, NODE, env)
            _expect_sort(node.v, NODE, env)
        elif isinstance(node, Sub):
            if not tri:
                raise SortError("subface atom outside the triangulation "
                                "signature")
            sf, ss = _lookup(node.f, env), _lookup(node.s, env)
            if sf[0] != "face" or ss[0] != "face":
                raise SortError("subface atom needs face variables")
            i, j = sf[1], ss[1]
            if j <= i or len(node.pi) != i + 1:
                raise SortError("subface labels %r do not fit sorts %r, %r"
                                % (node.pi, sf, ss))
            if len(set(node.pi)) != len(node.pi) \
                    or any(not 0 <= p <= j for p in node.pi):
                raise SortError("subface labels %r not distinct in 0..%d"
                                % (node.pi, j))
        else:
            raise MsoError("unknown AST node %r" % (node,))

    def _lookup(x, env):
        if x not in env:
            raise SortError("undeclared variable %r" % x)
        return env[x]

    def _expect_sort(x, sort, env):
        s = _lookup(x, env)
        if s != sort:
            raise SortError("variable %r has sort %r, expected %r"
                            % (x, s, sort))

    walk(f, env)


# ---------------------------------------------------------------------------
# structures


class GraphStructure:
    """Adapter presenting a SimpleGraph or EdgeColouredGraph to evaluate()."""

    def __init__(self, g):
        self.g = g
        self.coloured = hasattr(g, "colours")
        self._nodes = sorted(g.nodes, key=repr)
        self._arcs = sorted(g.arcs, key=repr)
        self._adj = {}
        for arc in g.arcs:
            (u, v) = arc[0] if self.coloured else arc
            self._adj.setdefault(u, set()).add(v)
            self._adj.setdefault(v, set()).add(u)
        if self.coloured:
            self._by_colour = {}
            for (uv, c) in g.arcs:
                self._by_colour.setdefault(c, set()).add(uv)

    def carrier(self, sort):
        if sort == NODE:
            return self._nodes
        if sort == ARC:
            return self._arcs
        raise SortError("graph structures have no %r carrier" % (sort,))

    def resolve_colour(self, tok):
        for c in self.g.colours:
            if str(c) == tok:
                return c
        if tok.isdigit():
            i = int(tok)
            if 1 <= i <= len(self.g.colours):
                return self.g.colours[i - 1]
        raise SortError("colour %r not in this graph" % tok)

    def inc(self, e, v):
        uv = e[0] if self.coloured else e
        return v in uv

    def adj(self, u, v):
        return u != v and v in self._adj.get(u, ())

    def col(self, tok, e):
        if not self.coloured:
            raise SortError("colour atom on an uncoloured graph")
        return e[1] == self.resolve_colour(tok)

    def adjc(self, tok, u, v):
        if not self.coloured:
            raise SortError("colour atom on an uncoloured graph")
        if u == v:
            return False
        c = self.resolve_colour(tok)
        uv = tuple(sorted((u, v)))
        return uv in self._by_colour.get(c, ())

    def sub(self, pi, f, g):
        raise SortError("subface atom on a graph structure")


class TriStructure:
    """Adapter presenting a (Triangulation, Skeleton) pair to evaluate().

    Face elements are (dimension, face id) pairs.
    """

    def __init__(self, t, sk):
        self.t = t
        self.sk = sk
        self._sub_cache = {}

    def carrier(self, sort):
        if sort[0] == "face":
            i = sort[1]
            if not 0 <= i <= self.t.dim:
                raise SortError("no %d-faces in dimension %d" % (i, self.t.dim))
            return [(i, f.id) for f in self.sk.faces[i]]
        raise SortError("triangulation structures have no %r carrier" % (sort,))

    def sub(self, pi, f, g):
        from .triangulation import subface_pairs
        (i, fid), (j, gid) = f, g
        key = (i, j, pi)
        if key not in self._sub_cache:
            self._sub_cache[key] = subface_pairs(self.sk, i, j, pi)
        return (fid, gid) in self._sub_cache[key]

    def inc(self, *args):
        raise SortError("graph atom on a triangulation structure")

    adj = adjc = col = inc


def as_structure(structure):
    if isinstance(structure, (GraphStructure, TriStructure)):
        return structure
    if hasattr(structure, "face_of"):        # ColouredHasseDiagram
        return GraphStructure(structure.graph)
    if hasattr(structure, "nodes"):
        return GraphStructure(structure)
    if isinstance(structure, tuple) and len(structure) == 2:
        return TriStructure(*structure)
    raise MsoError("cannot interpret %r as a structure" % (structure,))


# ---------------------------------------------------------------------------
# free variables, evaluation


def free_vars(f, _cache=None):
    """Sorted tuple of free variable names."""
    if _cache is None:
        _cache = {}
    key = id(f)
    if key in _cache:
        return _cache[key]
    if isinstance(f, Lit):
        out = ()
    elif isinstance(f, Not):
        out = free_vars(f.sub, _cache)
    elif isinstance(f, (And, Or, Implies)):
        out = tuple(sorted(set(free_vars(f.left, _cache))
                           | set(free_vars(f.right, _cache))))
    elif isinstance(f, Quant):
        out = tuple(v for v in free_vars(f.body, _cache) if v != f.var)
    elif isinstance(f, Eq):
        out = tuple(sorted({f.x, f.y}))
    elif isinstance(f, In):
        out = tuple(sorted({f.x, f.X}))
    elif isinstance(f, Inc):
        out = tuple(sorted({f.e, f.v}))
    elif isinstance(f, Adj):
        out = tuple(sorted({f.u, f.v}))
    elif isinstance(f, Col):
        out = (f.e,)
    elif isinstance(f, AdjC):
        out = tuple(sorted({f.u, f.v}))
    elif isinstance(f, Sub):
        out = tuple(sorted({f.f, f.s}))
    else:
        raise MsoError("unknown AST node %r" % (f,))
    _cache[key] = out
    return out


def _subsets(items):
    """All subsets as frozensets, in lexicographic order of the sorted
    element sequence (empty set first)."""
    items = sorted(items, key=repr)

    def rec(prefix, rest):
        for idx in range(len(rest)):
            cur = prefix + (rest[idx],)
            yield cur
            yield from rec(cur, rest[idx + 1:])
    yield frozenset()
    for seq in rec((), tuple(items)):
        yield frozenset(seq)


_MISSING = object()


class _Evaluator:
    """Shared machinery for total (two-valued) and partial (three-valued)
    evaluation.  In partial mode, set variables absent from the assignment
    are unknown and the result may be None ("cannot tell yet")."""

    def __init__(self, structure, partial=False):
        self.st = structure
        self.partial = partial
        self.fv_cache = {}
        self.memo = {}

    def run(self, f, assignment):
        return self.eval(f, dict(assignment))

    def eval(self, f, env):
        fv = free_vars(f, self.fv_cache)
        key = (id(f), tuple(env.get(v, _MISSING) for v in fv))
        try:
            hit = key in self.memo
        except TypeError:
            hit = False
            key = None
        if hit:
            return self.memo[key]
        out = self._eval(f, env)
        if key is not None:
            self.memo[key] = out
        return out

    def _eval(self, f, env):
        if isinstance(f, Lit):
            return f.value
        if isinstance(f, Not):
            v = self.eval(f.sub, env)
            return None if v is None else (not v)
        if isinstance(f, And):
            return self._fold((f.left, f.right), env, False)
        if isinstance(f, Or):
            return self._fold((f.left, f.right), env, True)
        if isinstance(f, Implies):
            l = self.eval(f.left, env)
            if l is False:
                return True
            r = self.eval(f.right, env)
            if r is True:
                return True
            if l is None or r is None:
                return None
            return r
        if isinstance(f, Quant):
            return self._quant(f, env)
        if isinstance(f, Eq):
            return self._val(f.x, env) == self._val(f.y, env) \
                if not self._unknown(env, f.x, f.y) else None
        if isinstance(f, In):
            if self._unknown(env, f.x, f.X):
                return None
            return self._val(f.x, env) in self._val(f.X, env)
        if isinstance(f, Inc):
            return self.st.inc(self._val(f.e, env), self._val(f.v, env))
        if isinstance(f, Adj):
            return self.st.adj(self._val(f.u, env), self._val(f.v, env))
        if isinstance(f, Col):
            return self.st.col(f.colour, self._val(f.e, env))
        if isinstance(f, AdjC):
            return self.st.adjc(f.colour, self._val(f.u, env),
                                self._val(f.v, env))
        if isinstance(f, Sub):
            return self.st.sub(f.pi, self._val(f.f, env), self._val(f.s, env))
        raise MsoError("unknown AST node %r" % (f,))

    def _unknown(self, env, *names):
        return self.partial and any(x not in env for x in names)

    def _val(self, x, env):
        if x not in env:
            raise MsoError("unassigned variable %r" % x)
        return env[x]

    def _fold(self, parts, env, is_or):
        saw_none = False
        for p in parts:
            v = self.eval(p, env)
            if v is None:
                saw_none = True
            elif v == is_or:
                return is_or
        return None if saw_none else (not is_or)

    def _quant(self, f, env):
        is_or = (f.kind == "exists")
        if is_set_sort(f.sort):
            values = _subsets(self.st.carrier(element_sort_of(f.sort)))
        else:
            values = self.st.carrier(f.sort)
        saw_none = False
        for val in values:
            env2 = dict(env)
            env2[f.var] = val
            v = self.eval(f.body, env2)
            if v is None:
                saw_none = True
            elif v == is_or:
                return is_or
        return None if saw_none else (not is_or)


def evaluate(structure, formula, assignment=None):
    """Exact truth value of formula on the structure under the assignment."""
    st = as_structure(structure)
    out = _Evaluator(st).run(formula, assignment or {})
    assert out is not None
    return out


def evaluate_partial(structure, formula, assignment):
    """Three-valued evaluation: set variables missing from the assignment
    are unknown; returns True, False or None."""
    st = as_structure(structure)
    return _Evaluator(st, partial=True).run(formula, assignment)


# ---------------------------------------------------------------------------
# extremum / evaluation problems


@dataclass(frozen=True)
class ExtremumProblem:
    formula: Formula
    free_vars: tuple    # ((name, sort), ...) in declaration order; set sorts
    coefficients: tuple  # rational coefficient per free variable

    def objective(self, sets):
        return sum(Fraction(c) * len(s)
                   for c, s in zip(self.coefficients, sets))


@dataclass(frozen=True)
class EvaluationProblem:
    formula: Formula
    free_vars: tuple
    mode: str           # "additive" | "multiplicative"
    weights: tuple      # one dict per free variable: element -> ring value

    def term(self, sets):
        if self.mode == "additive":
            return sum(w[x] for w, s in zip(self.weights, sets) for x in s)
        out = 1
        for w, s in zip(self.weights, sets):
            for x in sorted(s, key=repr):
                out = out * w[x]
        return out


def _flatten_and(f):
    if isinstance(f, And):
        return _flatten_and(f.left) + _flatten_and(f.right)
    return [f]


class _Search:
    """Backtracking over free set variables in declaration order.

    Subsets are tried in lexicographic order of their sorted element
    sequences, so the first-found optimum is the lexicographically least
    witness.  After each variable is fixed, every top-level conjunct is
    partially evaluated; a False conjunct prunes the subtree and True
    conjuncts stay settled along the branch (three-valued evaluation is
    monotone under refinement).
    """

    def __init__(self, structure, formula, names_sorts, budget):
        self.st = as_structure(structure)
        self.names = [n for n, _ in names_sorts]
        self.carriers = [sorted(self.st.carrier(element_sort_of(s)), key=repr)
                         for _, s in names_sorts]
        for _, s in names_sorts:
            if not is_set_sort(s):
                raise MsoError("free variable sorts must be set sorts")
        self.clauses = _flatten_and(formula)
        self.ev = _Evaluator(self.st, partial=True)
        self.budget = budget
        self.visited = 0

    def leaves(self):
        """Yield complete assignments (as tuples of frozensets) that satisfy
        the formula, in lexicographic order."""
        yield from self._rec(0, {}, [False] * len(self.clauses))

    def _rec(self, depth, env, settled):
        if depth == len(self.names):
            yield tuple(env[n] for n in self.names)
            return
        name = self.names[depth]
        for subset in _subsets(self.carriers[depth]):
            self.visited += 1
            if self.visited > self.budget:
                raise BudgetError("assignment budget exceeded")
            env[name] = subset
            child = list(settled)
            ok = True
            for ci, clause in enumerate(self.clauses):
                if child[ci]:
                    continue
                v = self.ev.eval(clause, env)
                if v is False:
                    ok = False
                    break
                if v is True:
                    child[ci] = True
            if ok:
                yield from self._rec(depth + 1, env, child)
        env.pop(name, None)


DEFAULT_BUDGET = 10 ** 7


def solve_extremum(structure, problem, budget=DEFAULT_BUDGET):
    """Minimise the linear objective over satisfying assignments.

    Returns (optimal value, witness tuple of frozensets), or None when the
    formula is unsatisfiable.  Raises BudgetError past the search budget.
    """
    search = _Search(structure, problem.formula, problem.free_vars, budget)
    best = None
    for sets in search.leaves():
        val = problem.objective(sets)
        if best is None or val < best[0]:
            best = (val, sets)
    return best


def solve_evaluation(structure, problem, budget=DEFAULT_BUDGET):
    """Sum the per-assignment weight terms over all satisfying assignments."""
    search = _Search(structure, problem.formula, problem.free_vars, budget)
    total = 0
    for sets in search.leaves():
        total = total + problem.term(sets)
    return total
