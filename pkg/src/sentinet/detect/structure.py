"""Structure learning and parameter fitting.

The structure is tree-augmented: the class variable parents every
feature, and the features themselves form a spanning tree chosen by
maximum class-conditional mutual information (computed from empirical
counts, zero cells contributing zero).  Edges are ranked by
(-information, low id, high id) so the learned tree is deterministic,
and the tree is rooted at the lowest feature id.

The result is deliberately constrained: every feature has at most two
parents, which keeps the cliques small, the fit closed-form, and the
network easy to section.
"""

import numpy as np

from sentinet.bayes.network import BayesNet, Cpt, Variable
from sentinet.detect.pipeline import Dataset
from sentinet.errors import EmptyDatasetError


def _conditional_mi(ds: Dataset, i: int, j: int) -> float:
    """I(X_i ; X_j | class) from counts."""
    c = ds.data[:, Dataset.CLASS_VAR]
    xi = ds.data[:, i]
    xj = ds.data[:, j]
    nc, ni, nj = ds.arities[Dataset.CLASS_VAR], ds.arities[i], ds.arities[j]
    code = (c * ni + xi) * nj + xj
    counts = np.bincount(code, minlength=nc * ni * nj).reshape(nc, ni, nj)
    counts = counts.astype(np.float64)
    n = ds.n_rows
    total = 0.0
    for cc in range(nc):
        block = counts[cc]
        n_c = block.sum()
        if n_c == 0:
            continue
        pj = block / n_c
        rows = pj.sum(axis=1, keepdims=True)
        cols = pj.sum(axis=0, keepdims=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(pj > 0, pj / (rows * cols), 1.0)
        total += (n_c / n) * float(np.sum(pj * np.log(ratio)))
    return total


def learn_structure(ds: Dataset) -> tuple[tuple[int, ...], ...]:
    """Parent tuple per variable id; the class variable has none."""
    if ds.n_rows == 0:
        raise EmptyDatasetError("cannot learn structure from zero rows")
    features = list(ds.feature_vars())
    if not features:
        raise EmptyDatasetError("dataset has no feature columns")

    scored = []
    for a in range(len(features)):
        for b in range(a + 1, len(features)):
            i, j = features[a], features[b]
            scored.append((-_conditional_mi(ds, i, j), i, j))
    scored.sort()

    comp = {f: f for f in features}

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    adj: dict[int, list[int]] = {f: [] for f in features}
    picked = 0
    for _, i, j in scored:
        ri, rj = find(i), find(j)
        if ri == rj:
            continue
        comp[ri] = rj
        adj[i].append(j)
        adj[j].append(i)
        picked += 1
        if picked == len(features) - 1:
            break

    root = features[0]
    feature_parent: dict[int, int] = {}
    seen = {root}
    queue = [root]
    while queue:
        f = queue.pop(0)
        for nb in sorted(adj[f]):
            if nb not in seen:
                seen.add(nb)
                feature_parent[nb] = f
                queue.append(nb)

    parents: list[tuple[int, ...]] = []
    for v in range(ds.n_vars):
        if v == Dataset.CLASS_VAR:
            parents.append(())
        elif v in feature_parent:
            parents.append(tuple(sorted((Dataset.CLASS_VAR, feature_parent[v]))))
        else:
            parents.append((Dataset.CLASS_VAR,))
    return tuple(parents)


def fit_cpts(parents, ds: Dataset, alpha: float = 1.0) -> BayesNet:
    """Closed-form table fit with additive smoothing.

    Each table entry is (count + alpha) / (row count + alpha * arity), so
    parent combinations never seen in training back off to uniform.
    """
    variables = [
        Variable(v, ds.names[v], ds.state_names[v]) for v in range(ds.n_vars)
    ]
    cpts = []
    for v in range(ds.n_vars):
        pv = parents[v]
        row_arities = [ds.arities[p] for p in pv]
        n_rows = int(np.prod(row_arities)) if pv else 1
        code = np.zeros(ds.n_rows, dtype=np.int64)
        for p in pv:
            code = code * ds.arities[p] + ds.data[:, p]
        code = code * ds.arities[v] + ds.data[:, v]
        counts = np.bincount(code, minlength=n_rows * ds.arities[v])
        table = counts.reshape(n_rows, ds.arities[v]).astype(np.float64) + alpha
        totals = table.sum(axis=1, keepdims=True)
        empty = totals[:, 0] == 0.0  # only reachable with alpha=0
        if np.any(empty):
            table[empty] = 1.0
            totals = table.sum(axis=1, keepdims=True)
        table /= totals
        cpts.append(Cpt(v, pv, table))
    return BayesNet(variables, cpts)
