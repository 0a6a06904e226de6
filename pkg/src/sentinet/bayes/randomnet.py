"""Seeded random-network generation.

Used by simulation drills and command-line demos that need a concrete
network without a dataset.  Parent ids always sit below the child id, so
variable order is a topological order, and table entries get a small
positive floor so no evidence combination has zero probability.
"""

import numpy as np

from sentinet.bayes.network import BayesNet, Cpt, Variable


def random_network(rng, n: int, max_parents: int = 3, max_arity: int = 2) -> BayesNet:
    variables = []
    for i in range(n):
        arity = 2 if max_arity == 2 else int(rng.integers(2, max_arity + 1))
        variables.append(Variable(i, f"v{i}", tuple(f"s{k}" for k in range(arity))))
    cpts = []
    for i in range(n):
        k = int(rng.integers(0, min(i, max_parents) + 1))
        parents = tuple(sorted(rng.choice(i, size=k, replace=False))) if k else ()
        rows = 1
        for p in parents:
            rows *= variables[p].arity
        table = rng.random((rows, variables[i].arity)) + 0.05
        table /= table.sum(axis=1, keepdims=True)
        cpts.append(Cpt(i, parents, table))
    return BayesNet(variables, cpts)
