"""Simple graphs, edge-coloured graphs, and the clique-marker encoding.

An edge-coloured graph carries an ordered colour list c_1..c_k; parallel
arcs are allowed only with distinct colours and loops never.  The encoding
into a plain simple graph inserts k marker cliques of sizes 3..k+2, an
image node per original node, and a degree-3 arc node per coloured arc
whose third neighbour identifies the colour clique.
"""

import json
from dataclasses import dataclass
from math import comb


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class SimpleGraph:
    nodes: tuple
    arcs: tuple  # sorted tuple of (u, v) with u < v

    def __post_init__(self):
        nodeset = set(self.nodes)
        for u, v in self.arcs:
            if u == v:
                raise GraphError("loop at node %r" % u)
            if u not in nodeset or v not in nodeset:
                raise GraphError("arc (%r, %r) uses an undeclared node" % (u, v))
        if len(set(self.arcs)) != len(self.arcs):
            raise GraphError("parallel arcs in a simple graph")

    @property
    def size(self):
        return len(self.nodes) + len(self.arcs)

    def neighbours(self, v):
        out = set()
        for a, b in self.arcs:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return out

    def adjacent(self, u, v):
        if u == v:
            return False
        arcset = set(self.arcs)
        return (u, v) in arcset or (v, u) in arcset


def make_simple_graph(nodes, arcs):
    arcs = tuple(sorted({tuple(sorted(a)) for a in arcs}))
    return SimpleGraph(tuple(sorted(nodes)), arcs)


@dataclass(frozen=True)
class EdgeColouredGraph:
    nodes: tuple
    colours: tuple          # ordered colour names c_1..c_k
    arcs: tuple             # sorted tuple of ((u, v), colour) with u < v

    def __post_init__(self):
        nodeset = set(self.nodes)
        colourset = set(self.colours)
        if len(colourset) != len(self.colours):
            raise GraphError("repeated colour name")
        for (u, v), c in self.arcs:
            if u == v:
                raise GraphError("loop at node %r" % u)
            if u not in nodeset or v not in nodeset:
                raise GraphError("arc (%r, %r) uses an undeclared node" % (u, v))
            if c not in colourset:
                raise GraphError("undeclared colour %r" % (c,))
        if len(set(self.arcs)) != len(self.arcs):
            raise GraphError("parallel arcs with equal colour")

    @property
    def k(self):
        return len(self.colours)

    def colour_index(self, c):
        """1-based index of colour c in the stored list."""
        return self.colours.index(c) + 1

    def node_skeleton(self):
        """Underlying simple graph on the same nodes, colours dropped."""
        return make_simple_graph(self.nodes, [uv for uv, _ in self.arcs])


def make_edge_coloured_graph(nodes, colours, arcs):
    canon = sorted({(tuple(sorted(uv)), c) for uv, c in arcs})
    return EdgeColouredGraph(tuple(sorted(nodes)), tuple(colours), tuple(canon))


@dataclass(frozen=True)
class EncodedGraph:
    graph: SimpleGraph
    origin: dict  # encoded node -> ("clique", i, j) | ("node", v) | ("arc", arc)

    def nodes_of_kind(self, kind):
        return sorted(n for n, o in self.origin.items() if o[0] == kind)


def encode_simple(g):
    """Encode an edge-coloured graph as a simple graph.

    For colour index i (1-based) a clique on i+2 fresh nodes; per original
    node v a node image; per arc ({v,w}, c_i) an arc node joined to the two
    endpoint images and to the first node of clique i.  Node ids are
    consecutive integers: clique nodes, then node images, then arc nodes.
    """
    origin = {}
    arcs = []
    nid = 0
    clique_first = {}
    for i in range(1, g.k + 1):
        members = []
        for j in range(1, i + 3):
            origin[nid] = ("clique", i, j)
            members.append(nid)
            nid += 1
        clique_first[i] = members[0]
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                arcs.append((members[a], members[b]))
    image = {}
    for v in g.nodes:
        origin[nid] = ("node", v)
        image[v] = nid
        nid += 1
    for (u, v), c in g.arcs:
        origin[nid] = ("arc", ((u, v), c))
        i = g.colour_index(c)
        arcs.append((image[u], nid))
        arcs.append((image[v], nid))
        arcs.append((clique_first[i], nid))
        nid += 1
    return EncodedGraph(make_simple_graph(range(nid), arcs), origin)


def encoded_size_formula(nv, ne, k):
    """Total node + arc count of the encoding, in closed form."""
    return nv + 4 * ne + comb(k + 4, 3) - 4


def parse_graph(text):
    """Parse the graph text format.

    Lines: ``colour <name>`` (in order), ``node <id>``,
    ``arc <u> <v> [<colour>]``.  Returns an EdgeColouredGraph when any
    colour is declared, otherwise a SimpleGraph.  Node ids are kept as
    integers when they look like integers.
    """
    def ident(tok):
        return int(tok) if tok.lstrip("-").isdigit() else tok

    colours = []
    nodes = []
    arcs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "colour" and len(parts) == 2:
            colours.append(parts[1])
        elif parts[0] == "node" and len(parts) == 2:
            nodes.append(ident(parts[1]))
        elif parts[0] == "arc" and len(parts) in (3, 4):
            u, v = ident(parts[1]), ident(parts[2])
            if len(parts) == 4:
                arcs.append(((u, v), parts[3]))
            else:
                arcs.append(((u, v), None))
        else:
            raise GraphError("line %d: cannot parse %r" % (lineno, raw))
    if colours:
        coloured = []
        for uv, c in arcs:
            if c is None:
                raise GraphError("arc %r has no colour but colours are declared" % (uv,))
            coloured.append((uv, c))
        return make_edge_coloured_graph(nodes, colours, coloured)
    if any(c is not None for _, c in arcs):
        raise GraphError("arc colour used without a colour declaration")
    return make_simple_graph(nodes, [uv for uv, _ in arcs])


def encoded_to_json(enc):
    """JSON text for an encoded graph, including the origin map."""
    def origin_obj(o):
        if o[0] == "clique":
            return {"kind": "clique", "colour_index": o[1], "member": o[2]}
        if o[0] == "node":
            return {"kind": "node", "of": o[1]}
        (u, v), c = o[1]
        return {"kind": "arc", "of": [u, v], "colour": c}

    doc = {
        "nodes": [{"id": n, "origin": origin_obj(enc.origin[n])}
                  for n in enc.graph.nodes],
        "arcs": [[u, v] for u, v in enc.graph.arcs],
    }
    return json.dumps(doc, indent=2)
