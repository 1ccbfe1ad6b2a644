"""Tree decompositions: validation, construction, and two lifts.

A tree decomposition of a graph assigns a bag of graph nodes to every
node of a tree so that every graph node appears somewhere, every arc's
endpoints share a bag, and the bags containing any fixed graph node form
a connected subtree.  Width is the maximum bag size minus one.

Construction is deliberately desk-scale: a min-fill heuristic for general
inputs and an exact minimum-width search for at most 14 nodes.  Loops in
a multigraph impose only node coverage; parallel arcs collapse to one
shared-bag condition.
"""

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .graphs import make_simple_graph


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class TreeDecomposition:
    tree_nodes: tuple            # sorted ids
    tree_links: tuple            # sorted (a, b) pairs, a < b
    bags: dict                   # tree node -> frozenset of graph nodes

    @property
    def width(self):
        if not self.bags:
            return -1
        return max(len(b) for b in self.bags.values()) - 1

    def link_neighbours(self, a):
        out = []
        for x, y in self.tree_links:
            if x == a:
                out.append(y)
            elif y == a:
                out.append(x)
        return out

    def to_text(self):
        lines = []
        for t in self.tree_nodes:
            lines.append("bag %s : %s"
                         % (t, " ".join(str(v) for v in sorted(self.bags[t]))))
        for a, b in self.tree_links:
            lines.append("link %s %s" % (a, b))
        return "\n".join(lines) + "\n"


def make_decomposition(bags, links):
    """Build a TreeDecomposition from {id: iterable} bags and id-pair links."""
    bagmap = {t: frozenset(b) for t, b in bags.items()}
    linkset = set()
    for a, b in links:
        if a == b or a not in bagmap or b not in bagmap:
            raise DecompositionError("bad link (%r, %r)" % (a, b))
        linkset.add(tuple(sorted((a, b))))
    return TreeDecomposition(tuple(sorted(bagmap)), tuple(sorted(linkset)), bagmap)


def parse_decomposition(text):
    """Parse ``bag <id> : <nodes...>`` / ``link <id1> <id2>`` lines."""
    bags = {}
    links = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "bag":
                colon = parts.index(":")
                bags[int(parts[1])] = [int(x) for x in parts[colon + 1:]]
            elif parts[0] == "link":
                links.append((int(parts[1]), int(parts[2])))
            else:
                raise DecompositionError("unknown record %r" % parts[0])
        except (ValueError, IndexError) as exc:
            if isinstance(exc, DecompositionError):
                raise
            raise DecompositionError("line %d: cannot parse %r" % (lineno, raw))
    return make_decomposition(bags, links)


def _graph_conditions(g):
    """(node list, list of distinct unordered arc endpoint pairs)."""
    if hasattr(g, "simple_arcs"):        # MultiGraph
        return list(g.nodes), g.simple_arcs()
    if hasattr(g, "colours"):            # EdgeColouredGraph
        return list(g.nodes), sorted({uv for uv, _ in g.arcs})
    return list(g.nodes), list(g.arcs)


def validate_decomposition(g, td):
    """(ok, report).  Report names the first violated condition + witness."""
    nodes, arcs = _graph_conditions(g)
    if not td.tree_nodes:
        return (not nodes), {"condition": "coverage", "witness": None} \
            if nodes else None
    # Tree shape: connected and acyclic.
    if len(td.tree_links) != len(td.tree_nodes) - 1:
        return False, {"condition": "tree", "witness": "link count"}
    seen = {td.tree_nodes[0]}
    frontier = [td.tree_nodes[0]]
    while frontier:
        t = frontier.pop()
        for u in td.link_neighbours(t):
            if u not in seen:
                seen.add(u)
                frontier.append(u)
    if len(seen) != len(td.tree_nodes):
        return False, {"condition": "tree", "witness": "disconnected"}
    covered = set().union(*td.bags.values()) if td.bags else set()
    for v in nodes:
        if v not in covered:
            return False, {"condition": "coverage", "witness": v}
    for u, v in arcs:
        if not any(u in b and v in b for b in td.bags.values()):
            return False, {"condition": "arc", "witness": (u, v)}
    for v in nodes:
        holding = [t for t in td.tree_nodes if v in td.bags[t]]
        seen = {holding[0]}
        frontier = [holding[0]]
        while frontier:
            t = frontier.pop()
            for u in td.link_neighbours(t):
                if u in td.bags and v in td.bags[u] and u not in seen:
                    seen.add(u)
                    frontier.append(u)
        if len(seen) != len(holding):
            return False, {"condition": "connectivity", "witness": v}
    return True, None


def _adjacency(nodes, arcs):
    adj = {v: set() for v in nodes}
    for u, v in arcs:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _decomposition_from_order(nodes, arcs, order):
    """Standard elimination-order construction; always valid for the input."""
    adj = _adjacency(nodes, arcs)
    bags = {}
    pos = {v: i for i, v in enumerate(order)}
    live = {v: set(adj[v]) for v in nodes}
    for idx, v in enumerate(order):
        later = {u for u in live[v] if pos[u] > idx}
        bags[idx] = frozenset(later | {v})
        for a in later:
            for b in later:
                if a != b:
                    live[a].add(b)
        for u in later:
            live[u].discard(v)
    links = []
    roots = []
    for idx, v in enumerate(order):
        rest = bags[idx] - {v}
        if rest:
            nxt = min(pos[u] for u in rest)
            links.append((idx, nxt))
        else:
            roots.append(idx)
    # A disconnected graph yields one root bag per component; chain them
    # so the result is a single tree.
    for a, b in zip(roots, roots[1:]):
        links.append((a, b))
    return make_decomposition(bags, links)


def decompose(g, mode="heuristic"):
    """A valid tree decomposition; exact minimum width for <= 14 nodes."""
    nodes, arcs = _graph_conditions(g)
    if not nodes:
        raise DecompositionError("empty graph")
    if mode == "exact":
        if len(nodes) > 14:
            raise DecompositionError("exact mode capped at 14 nodes")
        order = _exact_order(nodes, arcs)
    elif mode == "heuristic":
        order = _min_fill_order(nodes, arcs)
    else:
        raise DecompositionError("unknown mode %r" % mode)
    return _decomposition_from_order(nodes, arcs, order)


def _min_fill_order(nodes, arcs):
    adj = _adjacency(nodes, arcs)
    remaining = set(nodes)
    order = []
    while remaining:
        best = None
        for v in sorted(remaining):
            nb = [u for u in adj[v] if u in remaining]
            fill = sum(1 for a, b in combinations(nb, 2) if b not in adj[a])
            key = (fill, len(nb), v)
            if best is None or key < best:
                best = key
                pick = v
        order.append(pick)
        remaining.discard(pick)
        nb = [u for u in adj[pick] if u in remaining]
        for a, b in combinations(nb, 2):
            adj[a].add(b)
            adj[b].add(a)
    return order


def _exact_order(nodes, arcs):
    """Minimum-width elimination order by dynamic programming over subsets.

    TW(S) for eliminated-set S is min over the next victim v in S of
    max(TW(S minus v), number of nodes outside S minus v reachable from v
    through S minus v) — the size of v's bag when v is eliminated last
    among S.
    """
    nodes = sorted(nodes)
    index = {v: i for i, v in enumerate(nodes)}
    adj = _adjacency(nodes, arcs)
    n = len(nodes)

    def q_size(mask_wo_v, v):
        # Neighbourhood of v reachable through mask_wo_v, counted outside it.
        seen = 1 << index[v]
        frontier = [v]
        out = set()
        while frontier:
            x = frontier.pop()
            for u in adj[x]:
                bit = 1 << index[u]
                if seen & bit:
                    continue
                seen |= bit
                if mask_wo_v & bit:
                    frontier.append(u)
                else:
                    out.add(u)
        return len(out)

    memo = {0: (-1, None)}

    def solve(mask):
        if mask in memo:
            return memo[mask]
        best = None
        for i in range(n):
            bit = 1 << i
            if not mask & bit:
                continue
            sub = mask ^ bit
            w = max(solve(sub)[0], q_size(sub, nodes[i]))
            if best is None or w < best[0] or (w == best[0] and i < best[1]):
                best = (w, i)
        memo[mask] = best
        return best

    order = []
    mask = (1 << n) - 1
    while mask:
        _, i = solve(mask)
        order.append(nodes[i])
        mask ^= 1 << i
    order.reverse()
    return order


def lift_to_encoded(td, g, enc):
    """Lift a decomposition of the coloured graph to its encoding.

    Copied bags carry the node images plus every clique node; each arc
    gets a fresh leaf bag with its arc node, endpoint images, and the
    clique nodes, attached to the first tree node whose bag contains both
    endpoints.  Width grows by at most C(k+3, 2) - 1.
    """
    ok, report = validate_decomposition(g.node_skeleton(), td)
    if not ok:
        raise DecompositionError("invalid decomposition: %r" % (report,))
    clique_nodes = [n for n, o in sorted(enc.origin.items()) if o[0] == "clique"]
    image = {o[1]: n for n, o in enc.origin.items() if o[0] == "node"}
    arc_node = {o[1]: n for n, o in enc.origin.items() if o[0] == "arc"}
    bags = {t: frozenset(image[v] for v in td.bags[t]) | frozenset(clique_nodes)
            for t in td.tree_nodes}
    links = list(td.tree_links)
    fresh = max(td.tree_nodes) + 1 if td.tree_nodes else 0
    for (u, v), c in g.arcs:
        home = next(t for t in td.tree_nodes
                    if u in td.bags[t] and v in td.bags[t])
        e = arc_node[((u, v), c)]
        bags[fresh] = frozenset({e, image[u], image[v]} | set(clique_nodes))
        links.append((home, fresh))
        fresh += 1
    out = make_decomposition(bags, links)
    assert out.width <= td.width + comb(g.k + 3, 2) - 1
    return out


def lift_to_hasse(td, t, sk, h):
    """Lift a dual-graph decomposition to the coloured Hasse diagram.

    Same tree; each bag is replaced by its simplices' Hasse nodes together
    with all their subfaces and the empty-face node.  Width is at most
    (2^(d+1) - 1)(w + 1) where w is the input width.
    """
    from .triangulation import dual_graph
    ok, report = validate_decomposition(dual_graph(t), td)
    if not ok:
        raise DecompositionError("invalid decomposition: %r" % (report,))
    closure = {s: h.closure_of_simplex(s) for s in range(t.n)}
    bags = {}
    for tn in td.tree_nodes:
        bag = {h.empty_node}
        for s in td.bags[tn]:
            bag |= closure[s]
        bags[tn] = frozenset(bag)
    out = make_decomposition(bags, td.tree_links)
    assert out.width <= (2 ** (t.dim + 1) - 1) * (td.width + 1)
    return out
