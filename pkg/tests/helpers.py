"""Shared generators for randomized tests.

Everything here is seeded by the caller; no module-level RNG state.
"""

from sentinet.bayes import build_junction_tree, moralize, triangulate


def random_net(rng, n, max_parents=3, max_arity=2):
    """Random DAG where every parent id is below the child id.

    CPT entries are strictly positive, so any evidence combination has
    nonzero probability and oracle comparisons never hit a 0/0 case.
    """
    from sentinet.bayes.randomnet import random_network

    return random_network(rng, n, max_parents=max_parents, max_arity=max_arity)


def random_evidence(rng, net, max_vars=None):
    """Evidence on a random subset of variables (possibly empty)."""
    limit = net.n if max_vars is None else min(max_vars, net.n)
    k = int(rng.integers(0, limit + 1))
    picked = rng.choice(net.n, size=k, replace=False)
    return {int(v): int(rng.integers(0, net.arity(int(v)))) for v in picked}


def jt_for(net):
    tri = triangulate(moralize(net))
    return build_junction_tree(tri.chordal, tri.order, net)


def random_sectioning(rng, net, k):
    """Random sound sectioning of net into k linked subnets."""
    from sentinet.msbn.partition import sound_sectioning

    return sound_sectioning(net, k, rng)
