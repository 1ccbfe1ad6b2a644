"""d-dimensional triangulations built from simplices glued along facets.

A triangulation is a collection of abstract d-simplices, some of whose
facets are affinely identified in pairs.  The facet opposite vertex f of a
simplex is called facet f; a gluing carries a total permutation p of the
vertex labels 0..d with p(f1) = f2, so facet vertices go to facet vertices.

Faces of intermediate dimension are the equivalence classes of simplex
subfaces under the identifications induced by the facet gluings.  We track
the full vertex correspondences of every class with a union-find whose
edges are labelled by bijections, so ordered subface relations can be
answered exactly, including for self-identified faces.
"""

from dataclasses import dataclass, field


class TriangulationError(ValueError):
    pass


@dataclass(frozen=True)
class Gluing:
    """One identified facet pair, stored in canonical orientation.

    ``perm`` is the image tuple of the vertex permutation from simplex s1
    to simplex s2; perm[f1] == f2.
    """
    s1: int
    f1: int
    s2: int
    f2: int
    perm: tuple

    def reversed(self):
        inv = [0] * len(self.perm)
        for a, b in enumerate(self.perm):
            inv[b] = a
        return Gluing(self.s2, self.f2, self.s1, self.f1, tuple(inv))


@dataclass(frozen=True)
class Triangulation:
    dim: int
    n: int
    gluings: tuple  # tuple of Gluing, canonically oriented and sorted

    def __post_init__(self):
        validate(self)

    @property
    def slots(self):
        """All (simplex, facet) slots."""
        return [(s, f) for s in range(self.n) for f in range(self.dim + 1)]

    def glued_slots(self):
        out = {}
        for g in self.gluings:
            out[(g.s1, g.f1)] = g
            out[(g.s2, g.f2)] = g.reversed()
        return out

    def boundary_slots(self):
        glued = self.glued_slots()
        return [sl for sl in self.slots if sl not in glued]

    def is_closed(self):
        return not self.boundary_slots()

    def to_text(self):
        lines = ["dim %d" % self.dim, "simplices %d" % self.n]
        for g in self.gluings:
            lines.append("glue %d %d %d %d : %s"
                         % (g.s1, g.f1, g.s2, g.f2,
                            " ".join(str(p) for p in g.perm)))
        return "\n".join(lines) + "\n"


def make_triangulation(dim, n, gluings):
    """Build a Triangulation from raw gluing records, canonicalising."""
    canon = set()
    for g in gluings:
        if (g.s2, g.f2) < (g.s1, g.f1):
            g = g.reversed()
        canon.add(g)
    return Triangulation(dim, n, tuple(sorted(
        canon, key=lambda g: (g.s1, g.f1, g.s2, g.f2))))


def validate(t):
    """Raise TriangulationError unless t is a valid triangulation."""
    if t.dim < 1:
        raise TriangulationError("dimension must be at least 1")
    if t.n < 0:
        raise TriangulationError("negative simplex count")
    used = set()
    for g in t.gluings:
        d = t.dim
        for s, f in ((g.s1, g.f1), (g.s2, g.f2)):
            if not (0 <= s < t.n):
                raise TriangulationError("simplex index %d out of range" % s)
            if not (0 <= f <= d):
                raise TriangulationError("facet label %d out of range" % f)
        if (g.s1, g.f1) == (g.s2, g.f2):
            raise TriangulationError(
                "facet glued to itself: simplex %d facet %d" % (g.s1, g.f1))
        if sorted(g.perm) != list(range(d + 1)):
            raise TriangulationError("gluing map %r is not a permutation of 0..%d"
                                     % (g.perm, d))
        if g.perm[g.f1] != g.f2:
            raise TriangulationError(
                "gluing map does not send facet %d to facet %d" % (g.f1, g.f2))
        for slot in ((g.s1, g.f1), (g.s2, g.f2)):
            if slot in used:
                raise TriangulationError(
                    "facet used twice: simplex %d facet %d" % slot)
            used.add(slot)


def parse_triangulation(text):
    """Parse the triangulation text format; validates the result.

    Lines: ``dim <d>``, ``simplices <n>``,
    ``glue <s1> <f1> <s2> <f2> : <p0> ... <pd>``.  Lines starting with
    ``#`` are comments.  Reverse gluing records may be omitted.
    """
    dim = None
    n = None
    gluings = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "dim":
                dim = int(parts[1])
            elif parts[0] == "simplices":
                n = int(parts[1])
            elif parts[0] == "glue":
                if dim is None:
                    raise TriangulationError("glue before dim")
                colon = parts.index(":")
                s1, f1, s2, f2 = (int(x) for x in parts[1:colon])
                perm = tuple(int(x) for x in parts[colon + 1:])
                if len(perm) != dim + 1:
                    raise TriangulationError("gluing map has wrong length")
                gluings.append(Gluing(s1, f1, s2, f2, perm))
            else:
                raise TriangulationError("unknown record %r" % parts[0])
        except (IndexError, ValueError) as exc:
            if isinstance(exc, TriangulationError):
                raise
            raise TriangulationError("line %d: cannot parse %r" % (lineno, raw))
    if dim is None or n is None:
        raise TriangulationError("missing dim or simplices record")
    # Drop explicit reverse records (they must agree with the forward ones).
    return make_triangulation(dim, n, gluings)


load_and_validate = parse_triangulation


@dataclass
class Face:
    """One i-face of the triangulation.

    ``instances`` lists every (simplex, embedding) pair realising the face,
    where embedding is a tuple giving, for each face label 0..i, the simplex
    vertex it sits at.  ``canonical`` indexes the instance that defines the
    labels: ascending vertex order on the lexicographically least
    (simplex, vertex set) appearance.
    """
    dim: int
    id: int
    instances: list
    canonical: int = 0

    @property
    def simplices(self):
        return sorted({s for s, _ in self.instances})


@dataclass
class Skeleton:
    dim: int
    faces: list                # faces[i] = list of Face of dimension i
    self_identified: bool = False
    _emb_index: dict = field(default_factory=dict, repr=False)

    @property
    def f_vector(self):
        return tuple(len(fs) for fs in self.faces)

    def total_faces(self):
        return sum(self.f_vector)

    def face_at(self, i, simplex, embedding):
        """Face id of dimension i realised at (simplex, embedding), or None."""
        return self._emb_index.get((i, simplex, tuple(embedding)))


@dataclass
class MultiGraph:
    """Nodes plus a multiset of unordered arcs; loops allowed."""
    nodes: list
    arcs: list  # list of (u, v) with u <= v

    def degree(self, v):
        deg = 0
        for a, b in self.arcs:
            if a == v:
                deg += 1
            if b == v:
                deg += 1
        return deg

    def simple_arcs(self):
        """Distinct non-loop arcs."""
        return sorted({(a, b) for a, b in self.arcs if a != b})


def _compose(outer, inner):
    """Map composition outer(inner(x)) for dict-represented bijections."""
    return {k: outer[v] for k, v in inner.items()}


def _invert(m):
    return {v: k for k, v in m.items()}


class _LabelledUnionFind:
    """Union-find over (simplex, vertex-subset) keys with bijection labels.

    ``to_root[x]`` composed along parents gives the bijection from x's
    vertex set to the root's vertex set.  When a union closes a cycle the
    resulting root automorphism is recorded as a symmetry generator.
    """

    def __init__(self):
        self.parent = {}
        self.to_root = {}
        self.autos = {}  # root -> list of automorphism dicts

    def add(self, key, verts):
        if key not in self.parent:
            self.parent[key] = key
            self.to_root[key] = {v: v for v in verts}

    def find(self, key):
        chain = []
        while self.parent[key] != key:
            chain.append(key)
            key = self.parent[key]
        root = key
        # Path compression, composing label maps.
        for k in reversed(chain):
            self.to_root[k] = _compose(self.to_root[self.parent[k]],
                                       self.to_root[k])
            self.parent[k] = root
        return root

    def union(self, a, b, a_to_b):
        ra = self.find(a)
        rb = self.find(b)
        ma = self.to_root[a]  # a -> ra
        mb = self.to_root[b]  # b -> rb
        if ra == rb:
            # mb o a_to_b o ma^-1 is an automorphism of ra's vertex set.
            sigma = _compose(_compose(mb, a_to_b), _invert(ma))
            if any(k != v for k, v in sigma.items()):
                self.autos.setdefault(ra, []).append(sigma)
            return
        # Attach rb below ra with label rb -> ra.
        self.parent[rb] = ra
        self.to_root[rb] = _compose(_compose(ma, _invert(a_to_b)), _invert(mb))
        if rb in self.autos:
            lift = self.to_root[rb]
            unlift = _invert(lift)
            for sigma in self.autos.pop(rb):
                self.autos.setdefault(ra, []).append(
                    _compose(lift, _compose(sigma, unlift)))


def _close_group(generators, verts):
    """All automorphisms generated by the given dicts (incl. identity)."""
    ident = tuple(sorted({v: v for v in verts}.items()))
    seen = {ident}
    frontier = [dict(ident)]
    gens = [dict(g) for g in generators]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = _compose(g, cur)
            key = tuple(sorted(nxt.items()))
            if key not in seen:
                seen.add(key)
                frontier.append(nxt)
    return [dict(k) for k in sorted(seen)]


def _subsets(items, size):
    items = list(items)
    if size == 0:
        yield ()
        return
    for i in range(len(items)):
        for rest in _subsets(items[i + 1:], size - 1):
            yield (items[i],) + rest


def compute_skeleton(t):
    """All faces of every dimension, as gluing-closure equivalence classes."""
    d = t.dim
    faces_by_dim = []
    self_identified = False
    emb_index = {}

    for i in range(d):
        uf = _LabelledUnionFind()
        for s in range(t.n):
            for sub in _subsets(range(d + 1), i + 1):
                uf.add((s, sub), sub)
        for g in t.gluings:
            facet_verts = [v for v in range(d + 1) if v != g.f1]
            for sub in _subsets(facet_verts, i + 1):
                img = tuple(sorted(g.perm[v] for v in sub))
                uf.union((g.s1, sub), (g.s2, img),
                         {v: g.perm[v] for v in sub})

        classes = {}
        for key in uf.parent:
            root = uf.find(key)
            classes.setdefault(root, []).append(key)

        faces = []
        decorated = []
        for root, members in classes.items():
            members.sort()
            s_star, sub_star = members[0]
            group = _close_group(uf.autos.get(root, []), uf.to_root[root].keys())
            if len(group) > 1:
                self_identified = True
            # Labels 0..i of the face follow ascending vertex order on the
            # least member; map them through to the root's vertex set.
            m_star = uf.to_root[(s_star, sub_star)]
            label_map = [m_star[v] for v in sub_star]
            instances = []
            for s, sub in members:
                inv = _invert(uf.to_root[(s, sub)])
                for sigma in group:
                    emb = tuple(inv[sigma[lv]] for lv in label_map)
                    instances.append((s, emb))
            instances = sorted(set(instances))
            canonical = instances.index((s_star, tuple(sub_star)))
            decorated.append(((s_star, sub_star), instances, canonical))
        decorated.sort()
        for fid, (_, instances, canonical) in enumerate(decorated):
            faces.append(Face(i, fid, instances, canonical))
            for s, emb in instances:
                emb_index[(i, s, emb)] = fid
        faces_by_dim.append(faces)

    top = []
    for s in range(t.n):
        emb = tuple(range(d + 1))
        top.append(Face(d, s, [(s, emb)]))
        emb_index[(d, s, emb)] = s
    faces_by_dim.append(top)

    return Skeleton(d, faces_by_dim, self_identified, emb_index)


def subface_holds(sk, f, pi, g):
    """Does face f sit in face g with f's labels 0..i at g's labels pi?

    Existential over instance pairs on a common simplex, so self-identified
    faces contribute every correspondence they realise.
    """
    pi = tuple(pi)
    if f.dim != len(pi) - 1:
        raise ValueError("label sequence length %d does not match face dimension %d"
                         % (len(pi), f.dim))
    if g.dim <= f.dim:
        raise ValueError("subface test needs dim g > dim f")
    if len(set(pi)) != len(pi) or any(not 0 <= p <= g.dim for p in pi):
        raise ValueError("labels %r not distinct values in 0..%d" % (pi, g.dim))
    f_instances = {}
    for s, emb in f.instances:
        f_instances.setdefault(s, set()).add(emb)
    for s, eg in g.instances:
        want = tuple(eg[p] for p in pi)
        if want in f_instances.get(s, ()):
            return True
    return False


def subface_pairs(sk, i, j, pi):
    """All (f_id, g_id) with dim f = i, dim g = j and f <=_pi g."""
    pi = tuple(pi)
    pairs = set()
    for g in sk.faces[j]:
        for s, eg in g.instances:
            fid = sk.face_at(i, s, tuple(eg[p] for p in pi))
            if fid is not None:
                pairs.add((fid, g.id))
    return pairs


def dual_graph(t):
    """Multigraph with a node per simplex and an arc per facet gluing."""
    arcs = [tuple(sorted((g.s1, g.s2))) for g in t.gluings]
    return MultiGraph(list(range(t.n)), sorted(arcs))


def subdivide_simplex(t, s):
    """Replace simplex s by d+1 simplices coned over a new interior vertex.

    This is a (1, d+1) move: the copy replacing facet f keeps the old
    vertex labels except that label f marks the apex.  For closed inputs
    the underlying space is unchanged.
    """
    d = t.dim
    if not 0 <= s < t.n:
        raise TriangulationError("simplex index %d out of range" % s)

    def new_index(f):
        # The copy for facet 0 reuses index s; the rest go at the end.
        return s if f == 0 else t.n + f - 1

    gluings = []
    for g in t.gluings:
        rec = g
        if rec.s1 == s:
            rec = Gluing(new_index(rec.f1), rec.f1, rec.s2, rec.f2, rec.perm)
        if rec.s2 == s:
            rec = Gluing(rec.s1, rec.f1, new_index(rec.f2), rec.f2, rec.perm)
        gluings.append(rec)
    # Internal walls between the copies: facet j of copy f meets facet f of
    # copy j under the transposition (f j).
    for f in range(d + 1):
        for j in range(f + 1, d + 1):
            perm = list(range(d + 1))
            perm[f], perm[j] = perm[j], perm[f]
            gluings.append(Gluing(new_index(f), j, new_index(j), f, tuple(perm)))
    return make_triangulation(d, t.n + d, gluings)
