"""Coloured Hasse diagrams of triangulations.

Nodes are the faces of every dimension plus one extra node for the empty
face.  An arc of colour p0..pi joins an i-face f to an (i+1)-face g
whenever f sits in g with f's labels 0..i at g's labels p0..pi; each
vertex is joined to the empty face by an arc of the empty colour "-".
Colours are strings over digit labels, "-" for the empty colour.
"""

import json
from dataclasses import dataclass
from itertools import permutations

from .graphs import make_edge_coloured_graph
from .triangulation import subface_holds

EMPTY_COLOUR = "-"


def hasse_colours(d):
    """All arc colours for dimension d, empty colour first.

    A level-i colour (joining i-faces to (i+1)-faces) is an injective
    sequence of length i+1 over {0..i+1}, giving (i+2)! arrangements per
    level; together with the empty colour this totals sum_{i=1}^{d+1} i!.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    colours = [EMPTY_COLOUR]
    for i in range(d):
        colours.extend(level_colours(i))
    return colours


def level_colours(i):
    """Colours usable between levels i and i+1, lexicographically."""
    return ["".join(str(x) for x in p)
            for p in permutations(range(i + 2), i + 1)]


def colour_level(c):
    """Level i such that colour c joins i-faces to (i+1)-faces; -1 for empty."""
    return -1 if c == EMPTY_COLOUR else len(c) - 1


@dataclass(frozen=True)
class ColouredHasseDiagram:
    graph: object                 # EdgeColouredGraph
    face_of: dict                 # node id -> (dim, face id) or None for empty
    level: dict                   # node id -> dim, or "empty"
    empty_node: int
    dim: int

    def nodes_at_level(self, i):
        return sorted(n for n, lv in self.level.items() if lv == i)

    def closure_of_simplex(self, s):
        """Hasse nodes of simplex s and all faces incident to it."""
        out = set()
        for n, fo in self.face_of.items():
            if fo is None:
                continue
            i, fid = fo
            if s in self._skeleton.faces[i][fid].simplices:
                out.add(n)
        return out

    def size(self):
        return len(self.graph.nodes) + len(self.graph.arcs)


def build_hasse(t, sk):
    """The coloured Hasse diagram of a triangulation with skeleton sk."""
    d = t.dim
    node_of = {}
    face_of = {}
    level = {}
    nid = 0
    for i in range(d + 1):
        for f in sk.faces[i]:
            node_of[(i, f.id)] = nid
            face_of[nid] = (i, f.id)
            level[nid] = i
            nid += 1
    empty_node = nid
    face_of[empty_node] = None
    level[empty_node] = "empty"
    nid += 1

    arcs = []
    for v in sk.faces[0]:
        arcs.append(((node_of[(0, v.id)], empty_node), EMPTY_COLOUR))
    for i in range(d):
        for c in level_colours(i):
            pi = tuple(int(x) for x in c)
            for f in sk.faces[i]:
                for g in sk.faces[i + 1]:
                    if subface_holds(sk, f, pi, g):
                        arcs.append(((node_of[(i, f.id)],
                                      node_of[(i + 1, g.id)]), c))

    graph = make_edge_coloured_graph(range(nid), hasse_colours(d), arcs)
    h = ColouredHasseDiagram(graph, face_of, level, empty_node, d)
    object.__setattr__(h, "_skeleton", sk)
    if not sk.self_identified:
        assert h.size() <= 2 ** d * (d + 3) * t.n
    return h


def hasse_to_json(h):
    nodes = []
    for n in h.graph.nodes:
        fo = h.face_of[n]
        nodes.append({"id": n,
                      "level": h.level[n] if fo is not None else "empty",
                      "face": None if fo is None else list(fo)})
    doc = {
        "dim": h.dim,
        "nodes": nodes,
        "arcs": [{"ends": [u, v], "colour": c} for (u, v), c in h.graph.arcs],
    }
    return json.dumps(doc, indent=2)
