"""Automatic sectioning: split a network into k linked subnets.

Starts from a random partition of the variables and a random subnet
tree, then repairs until the sectioning validates: each variable's home
subnet gets its parents, disjoint neighbors are bridged with a shared
variable, holder sets are made connected along the tree, and any shared
variable whose parents fit neither side of a link pulls its parents
into every subnet holding it.  Each repair strictly grows a
subnet, so the loop terminates (worst case: every subnet holds every
variable, which is trivially sound).
"""

import numpy as np

from sentinet.bayes.network import BayesNet
from sentinet.errors import UnsoundDsepsetError
from sentinet.msbn.sectioning import Msbn, SubnetSpec, section_network


def sound_sectioning(net: BayesNet, k: int, rng: np.random.Generator) -> Msbn:
    n = net.n
    k = min(k, n)
    perm = [int(x) for x in rng.permutation(n)]
    groups = [{perm[i]} for i in range(k)]
    for v in perm[k:]:
        groups[int(rng.integers(0, k))].add(v)

    neighbors: dict[int, set[int]] = {i: set() for i in range(k)}
    for i in range(1, k):
        p = int(rng.integers(0, i))
        neighbors[p].add(i)
        neighbors[i].add(p)

    for v in range(n):
        home = next(i for i in range(k) if v in groups[i])
        groups[home].update(net.parents(v))

    # A tree edge between disjoint subnets carries no shared variable, so
    # bridge it; groups only grow, so once is enough.
    for a in range(k):
        for b in sorted(neighbors[a]):
            if a < b and not groups[a] & groups[b]:
                v = min(groups[a] | groups[b])
                groups[a].add(v)
                groups[b].add(v)

    def connectivity_closure():
        changed = True
        while changed:
            changed = False
            for v in range(n):
                holders = {i for i in range(k) if v in groups[i]}
                anchor = min(holders)
                par: dict[int, int | None] = {anchor: None}
                stack = [anchor]
                while stack:
                    s = stack.pop()
                    for nb in sorted(neighbors[s]):
                        if nb not in par:
                            par[nb] = s
                            stack.append(nb)
                need = set()
                for h in holders:
                    x: int | None = h
                    while x is not None:
                        need.add(x)
                        x = par[x]
                for i in need - holders:
                    groups[i].add(v)
                    changed = True

    while True:
        connectivity_closure()
        specs = [
            SubnetSpec(i, tuple(sorted(groups[i])), tuple(sorted(neighbors[i])))
            for i in range(k)
        ]
        try:
            return section_network(net, specs)
        except UnsoundDsepsetError as err:
            for i in range(k):
                if err.variable in groups[i]:
                    groups[i].update(net.parents(err.variable))


def auto_section(net: BayesNet, k: int, seed: int = 0) -> Msbn:
    """Deterministic sound sectioning for a given seed."""
    return sound_sectioning(net, k, np.random.default_rng(seed))
