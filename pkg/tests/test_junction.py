import numpy as np
import pytest

from helpers import jt_for, random_evidence, random_net
from sentinet.bayes import (
    BayesNet,
    Cpt,
    Variable,
    all_posteriors,
    propagate,
    query_posterior,
)
from sentinet.errors import (
    NotCalibratedError,
    UnknownVariableError,
    ZeroProbabilityEvidenceError,
)


def chain_net():
    return BayesNet(
        [Variable(i, f"v{i}", ("s0", "s1")) for i in range(3)],
        [
            Cpt(0, (), np.array([[0.6, 0.4]])),
            Cpt(1, (0,), np.array([[0.7, 0.3], [0.2, 0.8]])),
            Cpt(2, (1,), np.array([[0.9, 0.1], [0.4, 0.6]])),
        ],
    )


def subtree_connected(jt, v):
    """Clusters containing v must form one connected piece of the tree."""
    holders = {i for i, c in enumerate(jt.clusters) if v in c}
    if not holders:
        return False
    adj = {i: set() for i in holders}
    for a, b in jt.edges:
        if a in holders and b in holders:
            adj[a].add(b)
            adj[b].add(a)
    stack = [min(holders)]
    seen = set()
    while stack:
        c = stack.pop()
        if c in seen:
            continue
        seen.add(c)
        stack.extend(adj[c] - seen)
    return seen == holders


def test_chain_clusters_and_separator():
    jt = jt_for(chain_net())
    assert jt.clusters == ((0, 1), (1, 2))
    assert jt.separators == ((1,),)


def test_v_structure_collapses_to_one_cluster():
    net = BayesNet(
        [Variable(i, f"v{i}", ("s0", "s1")) for i in range(3)],
        [
            Cpt(0, (), np.array([[0.5, 0.5]])),
            Cpt(1, (), np.array([[0.5, 0.5]])),
            Cpt(2, (0, 1), np.full((4, 2), 0.5)),
        ],
    )
    jt = jt_for(net)
    assert jt.clusters == ((0, 1, 2),)
    assert jt.edges == ()


def test_running_intersection_on_random_nets():
    rng = np.random.default_rng(23)
    for _ in range(20):
        net = random_net(rng, 8)
        jt = jt_for(net)
        for v in range(net.n):
            assert subtree_connected(jt, v)


def test_empty_evidence_reproduces_priors():
    net = chain_net()
    cal = propagate(jt_for(net), {})
    truth = all_posteriors(net)
    for v in range(net.n):
        np.testing.assert_allclose(query_posterior(cal, v).probs, truth[v].probs, atol=1e-12)


def test_full_evidence_leaves_single_nonzero_entries():
    net = chain_net()
    cal = propagate(jt_for(net), {0: 1, 1: 0, 2: 1})
    for pot in cal.potentials:
        assert np.count_nonzero(pot) == 1


def test_separator_agreement_after_propagation():
    rng = np.random.default_rng(31)
    for _ in range(15):
        net = random_net(rng, 12)
        evidence = random_evidence(rng, net, max_vars=4)
        cal = propagate(jt_for(net), evidence)
        for e, (a, b) in enumerate(cal.edges):
            sep = cal.separators[e]
            from_a = cal.marginal(a, sep)
            from_b = cal.marginal(b, sep)
            np.testing.assert_allclose(from_a, from_b, atol=1e-9)


def test_posterior_independent_of_cluster_choice():
    rng = np.random.default_rng(37)
    net = random_net(rng, 10)
    cal = propagate(jt_for(net), {3: 1})
    for v in range(net.n):
        expected = query_posterior(cal, v).probs
        for i, cluster in enumerate(cal.clusters):
            if v in cluster:
                m = cal.marginal(i, (v,))
                np.testing.assert_allclose(m / m.sum(), expected, atol=1e-9)


def test_matches_oracle_on_random_nets():
    rng = np.random.default_rng(41)
    for _ in range(30):
        net = random_net(rng, int(rng.integers(2, 13)))
        evidence = random_evidence(rng, net, max_vars=3)
        cal = propagate(jt_for(net), evidence)
        truth = all_posteriors(net, evidence)
        for v in range(net.n):
            got = query_posterior(cal, v).probs
            assert np.max(np.abs(got - truth[v].probs)) <= 1e-9


def test_propagate_is_idempotent():
    rng = np.random.default_rng(43)
    net = random_net(rng, 9)
    evidence = {1: 0, 4: 1}
    once = propagate(jt_for(net), evidence)
    twice = propagate(once, evidence)
    for p1, p2 in zip(once.potentials, twice.potentials):
        assert np.max(np.abs(p1 - p2)) <= 1e-12


def test_propagate_does_not_mutate_input():
    net = chain_net()
    jt = jt_for(net)
    before = [p.copy() for p in jt.potentials]
    propagate(jt, {0: 1})
    for p, b in zip(jt.potentials, before):
        np.testing.assert_array_equal(p, b)
    assert not jt.calibrated


def test_query_requires_calibration():
    with pytest.raises(NotCalibratedError):
        query_posterior(jt_for(chain_net()), 0)


def test_unknown_variable_rejected():
    cal = propagate(jt_for(chain_net()), {})
    with pytest.raises(UnknownVariableError):
        query_posterior(cal, 17)


def test_zero_mass_evidence_raises():
    net = BayesNet(
        [Variable(0, "A", ("a0", "a1")), Variable(1, "B", ("b0", "b1"))],
        [
            Cpt(0, (), np.array([[1.0, 0.0]])),
            Cpt(1, (0,), np.array([[0.5, 0.5], [0.5, 0.5]])),
        ],
    )
    with pytest.raises(ZeroProbabilityEvidenceError):
        propagate(jt_for(net), {0: 1})


def test_observed_target_query_is_delta():
    cal = propagate(jt_for(chain_net()), {1: 0})
    np.testing.assert_array_equal(query_posterior(cal, 1).probs, [1.0, 0.0])


def test_disconnected_net_still_calibrates():
    """Independent components end up joined by empty separators."""
    net = BayesNet(
        [Variable(0, "A", ("a0", "a1")), Variable(1, "B", ("b0", "b1"))],
        [
            Cpt(0, (), np.array([[0.7, 0.3]])),
            Cpt(1, (), np.array([[0.2, 0.8]])),
        ],
    )
    cal = propagate(jt_for(net), {0: 1})
    np.testing.assert_allclose(query_posterior(cal, 1).probs, [0.2, 0.8], atol=1e-12)
