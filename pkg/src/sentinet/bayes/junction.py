"""Junction tree construction, calibration, and posterior queries.

Cluster potentials are flat float64 arrays in row-major order over the
cluster's variables sorted by id.  Calibration is two-pass sum-product with
a fixed root (cluster 0): collect, then distribute, with stored separator
potentials (messages divide out what was previously sent, which makes
repeated propagation idempotent).  The flat-index maps connecting clusters
to separators are precomputed once per structure; the inner loops run on
the kernels backend.
"""

from dataclasses import dataclass, replace

import numpy as np

from sentinet import kernels
from sentinet.bayes.graphs import UGraph, is_perfect_elimination_order
from sentinet.bayes.network import BayesNet, Cpt, Evidence, Posterior
from sentinet.errors import (
    NotCalibratedError,
    NotChordalError,
    UnknownVariableError,
    ZeroProbabilityEvidenceError,
)


def _strides(arities: list[int]) -> list[int]:
    out = [1] * len(arities)
    for i in range(len(arities) - 2, -1, -1):
        out[i] = out[i + 1] * arities[i + 1]
    return out


@dataclass(eq=False)
class JunctionTree:
    variables: tuple[int, ...]
    arity: dict[int, int]
    clusters: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]
    separators: tuple[tuple[int, ...], ...]
    potentials: list[np.ndarray]
    sep_potentials: list[np.ndarray]
    calibrated: bool
    # structural caches, shared across copies
    digits: tuple[dict[int, np.ndarray], ...]
    edge_maps: tuple[tuple[np.ndarray, np.ndarray], ...]
    bfs_order: tuple[int, ...]
    parent_of: tuple[int, ...]
    parent_edge: tuple[int, ...]
    home_cluster: dict[int, int]

    def cluster_shape(self, i: int) -> tuple[int, ...]:
        return tuple(self.arity[v] for v in self.clusters[i])

    def cluster_table(self, i: int) -> np.ndarray:
        return self.potentials[i].reshape(self.cluster_shape(i))

    def marginal(self, i: int, subset: tuple[int, ...]) -> np.ndarray:
        """Marginal of cluster i's potential onto subset (flat, unnormalized)."""
        sub = sorted(subset)
        size = 1
        for v in sub:
            size *= self.arity[v]
        idx = flat_map(self.digits[i], sub, self.arity)
        return kernels.gather_add(self.potentials[i], idx, size)


def flat_map(digits: dict[int, np.ndarray], subset, arity: dict[int, int]) -> np.ndarray:
    """Flat index into a table over `subset` for each source flat position."""
    sub = sorted(subset)
    strides = _strides([arity[v] for v in sub])
    n = len(next(iter(digits.values()))) if digits else 1
    idx = np.zeros(n, dtype=np.int64)
    for v, s in zip(sub, strides):
        idx += digits[v] * s
    return idx


def _cluster_digits(cluster: tuple[int, ...], arity: dict[int, int]) -> dict[int, np.ndarray]:
    arities = [arity[v] for v in cluster]
    size = int(np.prod(arities)) if arities else 1
    strides = _strides(arities)
    pos = np.arange(size, dtype=np.int64)
    return {v: (pos // strides[i]) % arities[i] for i, v in enumerate(cluster)}


def _maximal_cliques(graph: UGraph, order: list[int]) -> list[tuple[int, ...]]:
    pos = {v: i for i, v in enumerate(order)}
    candidates = []
    for v in order:
        c = tuple(sorted([v] + [u for u in graph.neighbors(v) if pos[u] > pos[v]]))
        candidates.append(c)
    candidates.sort(key=len, reverse=True)
    kept: list[tuple[int, ...]] = []
    for c in candidates:
        cs = set(c)
        if not any(cs <= set(k) for k in kept):
            kept.append(c)
    kept.sort()
    return kept


class _UnionFind:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.p[rb] = ra
        return True


def build_junction_tree(
    chordal: UGraph,
    order: list[int],
    net: BayesNet,
    cpts: list[Cpt] | None = None,
) -> JunctionTree:
    """Clusters = maximal cliques; tree = max-weight spanning tree by
    separator cardinality (ties by lexicographic cluster-id pair); CPTs
    multiplied into the lowest-id containing cluster."""
    if not is_perfect_elimination_order(chordal, order):
        raise NotChordalError("graph is not chordal under the supplied order")
    arity = {v: net.arity(v) for v in chordal.vertices()}
    clusters = tuple(_maximal_cliques(chordal, order))
    k = len(clusters)

    cand = []
    for a in range(k):
        for b in range(a + 1, k):
            sep = tuple(sorted(set(clusters[a]) & set(clusters[b])))
            cand.append((-len(sep), a, b, sep))
    cand.sort()
    uf = _UnionFind(k)
    edges: list[tuple[int, int]] = []
    separators: list[tuple[int, ...]] = []
    for negw, a, b, sep in cand:
        if uf.union(a, b):
            edges.append((a, b))
            separators.append(sep)
            if len(edges) == k - 1:
                break

    digits = tuple(_cluster_digits(c, arity) for c in clusters)
    edge_maps = []
    for (a, b), sep in zip(edges, separators):
        edge_maps.append((
            flat_map(digits[a], sep, arity),
            flat_map(digits[b], sep, arity),
        ))

    adj: list[list[int]] = [[] for _ in range(k)]
    for i, (a, b) in enumerate(edges):
        adj[a].append(b)
        adj[b].append(a)
    parent_of = [-1] * k
    parent_edge = [-1] * k
    bfs = [0]
    seen = {0}
    qi = 0
    while qi < len(bfs):
        c = bfs[qi]
        qi += 1
        for nb in sorted(adj[c]):
            if nb not in seen:
                seen.add(nb)
                parent_of[nb] = c
                for i, (a, b) in enumerate(edges):
                    if (a, b) in ((c, nb), (nb, c)):
                        parent_edge[nb] = i
                        break
                bfs.append(nb)

    potentials = []
    for c in clusters:
        size = 1
        for v in c:
            size *= arity[v]
        potentials.append(np.ones(size, dtype=np.float64))
    sep_potentials = []
    for sep in separators:
        size = 1
        for v in sep:
            size *= arity[v]
        sep_potentials.append(np.ones(size, dtype=np.float64))

    home_cluster: dict[int, int] = {}
    for v in chordal.vertices():
        home_cluster[v] = min(i for i, c in enumerate(clusters) if v in c)

    if cpts is None:
        cpts = list(net.cpts)
    for cpt in sorted(cpts, key=lambda c: c.child):
        fam = tuple(sorted((cpt.child, *cpt.parents)))
        home = min(i for i, c in enumerate(clusters) if set(fam) <= set(c))
        axes = (*cpt.parents, cpt.child)
        t = cpt.table.reshape([arity[a] for a in axes])
        t = np.transpose(t, [axes.index(v) for v in fam])
        factor = np.ascontiguousarray(t).ravel()
        idx = flat_map(digits[home], fam, arity)
        kernels.scatter_multiply(potentials[home], factor, idx)

    return JunctionTree(
        variables=tuple(chordal.vertices()),
        arity=arity,
        clusters=clusters,
        edges=tuple(edges),
        separators=tuple(separators),
        potentials=potentials,
        sep_potentials=sep_potentials,
        calibrated=False,
        digits=digits,
        edge_maps=tuple(edge_maps),
        bfs_order=tuple(bfs),
        parent_of=tuple(parent_of),
        parent_edge=tuple(parent_edge),
        home_cluster=home_cluster,
    )


def _check_evidence(jt: JunctionTree, evidence: Evidence) -> None:
    for v, s in evidence.items():
        if v not in jt.arity:
            raise UnknownVariableError(f"no variable {v} in this tree")
        if not 0 <= s < jt.arity[v]:
            raise UnknownVariableError(f"variable {v} has no state {s}")


def propagate(jt: JunctionTree, evidence: Evidence | None = None) -> JunctionTree:
    """Enter evidence (zero incompatible entries) and run collect/distribute.

    Pure: returns a calibrated copy, the input tree is untouched.
    """
    evidence = dict(evidence or {})
    _check_evidence(jt, evidence)
    pots = [p.copy() for p in jt.potentials]
    seps = [s.copy() for s in jt.sep_potentials]

    for v in sorted(evidence):
        s = evidence[v]
        for i, cluster in enumerate(jt.clusters):
            if v in cluster:
                pots[i][jt.digits[i][v] != s] = 0.0

    def pass_message(src: int, dst: int, e: int) -> None:
        a, b = jt.edges[e]
        map_src = jt.edge_maps[e][0] if a == src else jt.edge_maps[e][1]
        map_dst = jt.edge_maps[e][0] if a == dst else jt.edge_maps[e][1]
        msg = kernels.gather_add(pots[src], map_src, len(seps[e]))
        ratio = kernels.safe_ratio(msg, seps[e])
        kernels.scatter_multiply(pots[dst], ratio, map_dst)
        seps[e] = msg

    for c in reversed(jt.bfs_order[1:]):
        pass_message(c, jt.parent_of[c], jt.parent_edge[c])
    if pots[0].sum() == 0.0:
        raise ZeroProbabilityEvidenceError("all mass eliminated by evidence")
    for c in jt.bfs_order[1:]:
        pass_message(jt.parent_of[c], c, jt.parent_edge[c])

    return replace(jt, potentials=pots, sep_potentials=seps, calibrated=True)


def query_posterior(jt: JunctionTree, target: int) -> Posterior:
    """Normalize the target's marginal out of its lowest containing cluster."""
    if not jt.calibrated:
        raise NotCalibratedError("propagate before querying")
    if target not in jt.arity:
        raise UnknownVariableError(f"no variable {target} in this tree")
    i = jt.home_cluster[target]
    marginal = kernels.gather_add(
        jt.potentials[i], jt.digits[i][target], jt.arity[target]
    )
    total = marginal.sum()
    if total == 0.0:
        raise ZeroProbabilityEvidenceError("calibrated tree carries no mass")
    return Posterior(target, marginal / total)
