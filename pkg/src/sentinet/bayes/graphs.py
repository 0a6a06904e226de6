"""Undirected graphs, moralization, min-fill triangulation, chordality.

Vertices are arbitrary integer labels (global variable ids), so the same
machinery serves the whole network and its sectioned subnets.  Every
iteration order is sorted, which makes all downstream structure
deterministic.
"""

from dataclasses import dataclass

from sentinet.bayes.network import BayesNet


class UGraph:
    def __init__(self, vertices=(), edges=()):
        self._adj: dict[int, set[int]] = {}
        for v in vertices:
            self.add_vertex(v)
        for u, v in edges:
            self.add_edge(u, v)

    def add_vertex(self, v: int) -> None:
        self._adj.setdefault(v, set())

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError("self loop")
        self.add_vertex(u)
        self.add_vertex(v)
        self._adj[u].add(v)
        self._adj[v].add(u)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self._adj))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(self._adj[v]))

    def edges(self) -> tuple[tuple[int, int], ...]:
        out = []
        for u in sorted(self._adj):
            for v in sorted(self._adj[u]):
                if u < v:
                    out.append((u, v))
        return tuple(out)

    def copy(self) -> "UGraph":
        g = UGraph()
        g._adj = {v: set(nb) for v, nb in self._adj.items()}
        return g

    def induced(self, keep) -> "UGraph":
        keep = set(keep)
        g = UGraph(vertices=sorted(keep))
        for u, v in self.edges():
            if u in keep and v in keep:
                g.add_edge(u, v)
        return g

    def complete(self, verts) -> None:
        """Add every edge among verts (in place)."""
        verts = sorted(verts)
        for i, u in enumerate(verts):
            for v in verts[i + 1:]:
                self.add_edge(u, v)

    def __eq__(self, other):
        return isinstance(other, UGraph) and self._adj == other._adj


def moralize(net: BayesNet) -> UGraph:
    """Drop edge directions and marry all co-parents of each child."""
    g = UGraph(vertices=[v.id for v in net.variables])
    for c in net.cpts:
        for p in c.parents:
            g.add_edge(p, c.child)
        parents = sorted(c.parents)
        for i, a in enumerate(parents):
            for b in parents[i + 1:]:
                g.add_edge(a, b)
    return g


@dataclass
class Triangulation:
    chordal: UGraph
    order: list[int]
    fill_edges: list[tuple[int, int]]


def _fill_count(g: UGraph, v: int) -> int:
    nb = g.neighbors(v)
    missing = 0
    for i, a in enumerate(nb):
        for b in nb[i + 1:]:
            if not g.has_edge(a, b):
                missing += 1
    return missing


def triangulate(graph: UGraph) -> Triangulation:
    """Min-fill elimination; ties broken by the lowest vertex label."""
    work = graph.copy()
    chordal = graph.copy()
    order: list[int] = []
    fill: list[tuple[int, int]] = []
    remaining = list(graph.vertices())
    while remaining:
        best = min(remaining, key=lambda v: (_fill_count(work, v), v))
        nb = work.neighbors(best)
        for i, a in enumerate(nb):
            for b in nb[i + 1:]:
                if not work.has_edge(a, b):
                    work.add_edge(a, b)
                    chordal.add_edge(a, b)
                    fill.append((min(a, b), max(a, b)))
        for u in nb:
            work._adj[u].discard(best)
        del work._adj[best]
        order.append(best)
        remaining.remove(best)
    return Triangulation(chordal, order, fill)


def is_perfect_elimination_order(graph: UGraph, order: list[int]) -> bool:
    """Later neighbors of each vertex must form a clique."""
    pos = {v: i for i, v in enumerate(order)}
    if sorted(order) != list(graph.vertices()):
        return False
    for v in order:
        later = [u for u in graph.neighbors(v) if pos[u] > pos[v]]
        for i, a in enumerate(later):
            for b in later[i + 1:]:
                if not graph.has_edge(a, b):
                    return False
    return True


def mcs_order(graph: UGraph) -> list[int]:
    """Maximum-cardinality search visit order; ties to the lowest label."""
    weight = {v: 0 for v in graph.vertices()}
    visited: list[int] = []
    unvisited = set(graph.vertices())
    while unvisited:
        v = max(sorted(unvisited), key=lambda u: (weight[u], -u))
        visited.append(v)
        unvisited.remove(v)
        for u in graph.neighbors(v):
            if u in unvisited:
                weight[u] += 1
    return visited


def is_chordal(graph: UGraph) -> bool:
    """Independent chordality check: reverse MCS order must be a PEO."""
    return is_perfect_elimination_order(graph, list(reversed(mcs_order(graph))))
