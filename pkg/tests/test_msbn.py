import numpy as np
import pytest

from helpers import random_net, random_sectioning
from sentinet.bayes import BayesNet, Cpt, Variable, all_posteriors
from sentinet.errors import (
    NetworkFormatError,
    NotAdjacentError,
    NotHypertreeError,
    UncoveredVariableError,
    UnknownVariableError,
    UnsoundDsepsetError,
)
from sentinet.msbn import (
    SubnetSpec,
    communicate_belief,
    compile_ljf,
    enter_evidence,
    full_communication,
    local_inference,
    parse_sectioning,
    section_network,
    serialize_sectioning,
)


def star_net():
    """0 and 1 both feed 2; 2 feeds 3 and 4."""
    rng = np.random.default_rng(71)
    variables = [Variable(i, f"v{i}", ("s0", "s1")) for i in range(5)]
    cpts = []
    for i, parents in enumerate([(), (), (0, 1), (2,), (2,)]):
        rows = 2 ** len(parents)
        t = rng.random((rows, 2)) + 0.1
        t /= t.sum(axis=1, keepdims=True)
        cpts.append(Cpt(i, parents, t))
    return BayesNet(variables, cpts)


def star_sectioning(net):
    return section_network(
        net,
        [
            SubnetSpec(0, (0, 1, 2), (1,)),
            SubnetSpec(1, (2, 3, 4), (0,)),
        ],
    )


def test_sound_two_subnet_split_accepted():
    msbn = star_sectioning(star_net())
    assert msbn.dsepsets[(0, 1)] == (2,)
    assert msbn.cpt_owner[2] == 0
    assert msbn.cpt_owner[3] == 1


def test_parents_in_different_subnets_rejected():
    net = star_net()
    with pytest.raises(UnsoundDsepsetError) as exc:
        section_network(
            net,
            [SubnetSpec(0, (0, 2, 3, 4), (1,)), SubnetSpec(1, (1, 2, 3, 4), (0,))],
        )
    assert exc.value.variable == 2


def test_cyclic_link_graph_rejected():
    net = star_net()
    with pytest.raises(NotHypertreeError):
        section_network(
            net,
            [
                SubnetSpec(0, (0, 1, 2), (1, 2)),
                SubnetSpec(1, (2, 3), (0, 2)),
                SubnetSpec(2, (2, 4), (0, 1)),
            ],
        )


def test_uncovered_variable_rejected():
    net = star_net()
    with pytest.raises(UncoveredVariableError):
        section_network(
            net,
            [SubnetSpec(0, (0, 1, 2), (1,)), SubnetSpec(1, (2, 3), (0,))],
        )


def test_one_sided_link_rejected():
    net = star_net()
    with pytest.raises(NotHypertreeError, match="one side"):
        section_network(
            net,
            [SubnetSpec(0, (0, 1, 2), (1,)), SubnetSpec(1, (2, 3, 4), ())],
        )


def test_disconnected_holders_rejected():
    """Variable 2 in the two end subnets but not the middle one."""
    net = star_net()
    with pytest.raises(NotHypertreeError, match="connected"):
        section_network(
            net,
            [
                SubnetSpec(0, (0, 1, 2), (1,)),
                SubnetSpec(1, (3, 4), (0, 2)),
                SubnetSpec(2, (2, 3), (1,)),
            ],
        )


def test_shared_single_variable_linkage_is_one_cluster():
    net = star_net()
    ljf = compile_ljf(star_sectioning(net))
    assert ljf.linkages[(0, 1)].variables == (2,)
    assert ljf.linkages[(0, 1)].store(0, 1).shape == (2,)
    assert ljf.linkages[(0, 1)].store(1, 0).shape == (2,)


def test_three_subnet_chain_has_two_linkages():
    net = star_net()
    msbn = section_network(
        net,
        [
            SubnetSpec(0, (0, 1, 2), (1,)),
            SubnetSpec(1, (0, 1, 2, 3), (0, 2)),
            SubnetSpec(2, (2, 4), (1,)),
        ],
    )
    ljf = compile_ljf(msbn)
    assert sorted(ljf.linkages) == [(0, 1), (1, 2)]


def test_linkage_contained_in_local_clusters_both_sides():
    rng = np.random.default_rng(73)
    for _ in range(10):
        net = random_net(rng, 12)
        msbn = random_sectioning(rng, net, int(rng.integers(2, 5)))
        ljf = compile_ljf(msbn)
        for (a, b), linkage in ljf.linkages.items():
            for side in (a, b):
                jt = ljf.local[side]
                assert any(set(linkage.variables) <= set(c) for c in jt.clusters)


def test_fresh_single_subnet_matches_global_priors():
    net = star_net()
    msbn = section_network(net, [SubnetSpec(0, (0, 1, 2, 3, 4), ())])
    ljf = compile_ljf(msbn)
    truth = all_posteriors(net)
    got = local_inference(ljf, 0)
    for v in range(net.n):
        np.testing.assert_allclose(got[v].probs, truth[v].probs, atol=1e-9)


def test_evidence_outside_subnet_rejected():
    ljf = compile_ljf(star_sectioning(star_net()))
    with pytest.raises(UnknownVariableError):
        enter_evidence(ljf, 0, {4: 1})
    with pytest.raises(UnknownVariableError):
        local_inference(ljf, 0, {3: 0})


def test_communicate_requires_adjacency():
    net = star_net()
    msbn = section_network(
        net,
        [
            SubnetSpec(0, (0, 1, 2), (1,)),
            SubnetSpec(1, (0, 1, 2, 3), (0, 2)),
            SubnetSpec(2, (2, 4), (1,)),
        ],
    )
    ljf = compile_ljf(msbn)
    with pytest.raises(NotAdjacentError):
        communicate_belief(ljf, 0, 2)


def test_absorption_carries_shared_posterior():
    ljf = compile_ljf(star_sectioning(star_net()))
    enter_evidence(ljf, 0, {0: 1, 1: 0})
    sender_view = local_inference(ljf, 0)[2].probs
    communicate_belief(ljf, 0, 1)
    receiver_view = local_inference(ljf, 1)[2].probs
    np.testing.assert_allclose(receiver_view, sender_view, atol=1e-12)


def test_no_message_means_no_influence():
    ljf = compile_ljf(star_sectioning(star_net()))
    before = local_inference(ljf, 1)[3].probs
    enter_evidence(ljf, 0, {0: 1})
    after = local_inference(ljf, 1)[3].probs
    np.testing.assert_array_equal(before, after)


def test_repeated_communication_is_idempotent():
    ljf = compile_ljf(star_sectioning(star_net()))
    enter_evidence(ljf, 0, {1: 1})
    communicate_belief(ljf, 0, 1)
    snapshot = [p.copy() for p in ljf.local[1].potentials]
    communicate_belief(ljf, 0, 1)
    for p, s in zip(ljf.local[1].potentials, snapshot):
        assert np.max(np.abs(p - s)) <= 1e-12


def test_communication_is_local_to_receiver():
    net = star_net()
    msbn = section_network(
        net,
        [
            SubnetSpec(0, (0, 1, 2), (1,)),
            SubnetSpec(1, (0, 1, 2, 3), (0, 2)),
            SubnetSpec(2, (2, 4), (1,)),
        ],
    )
    ljf = compile_ljf(msbn)
    enter_evidence(ljf, 0, {0: 1})
    bystander = [p.copy() for p in ljf.local[2].potentials]
    sender = [p.copy() for p in ljf.local[0].potentials]
    communicate_belief(ljf, 0, 1)
    for p, s in zip(ljf.local[2].potentials, bystander):
        np.testing.assert_array_equal(p, s)
    for p, s in zip(ljf.local[0].potentials, sender):
        np.testing.assert_array_equal(p, s)


def test_single_subnet_full_communication_is_noop():
    net = star_net()
    msbn = section_network(net, [SubnetSpec(0, (0, 1, 2, 3, 4), ())])
    ljf = compile_ljf(msbn)
    before = [p.copy() for p in ljf.local[0].potentials]
    full_communication(ljf)
    for p, s in zip(ljf.local[0].potentials, before):
        np.testing.assert_array_equal(p, s)


def scatter_evidence(rng, msbn, evidence):
    """Assign each observed variable to one subnet that holds it."""
    per_subnet = {s.id: {} for s in msbn.subnets}
    for v, state in evidence.items():
        holders = [s.id for s in msbn.subnets if v in s.variables]
        per_subnet[holders[int(rng.integers(0, len(holders)))]][v] = state
    return per_subnet


def test_full_communication_reaches_global_posterior():
    rng = np.random.default_rng(79)
    for _ in range(8):
        net = random_net(rng, 15)
        msbn = random_sectioning(rng, net, int(rng.integers(2, 5)))
        ljf = compile_ljf(msbn)
        k = int(rng.integers(0, 5))
        picked = rng.choice(net.n, size=k, replace=False)
        evidence = {int(v): int(rng.integers(0, 2)) for v in picked}
        for sid, ev in scatter_evidence(rng, msbn, evidence).items():
            enter_evidence(ljf, sid, ev)
        full_communication(ljf)
        truth = all_posteriors(net, evidence)
        for s in msbn.subnets:
            got = local_inference(ljf, s.id)
            for v in s.variables:
                assert np.max(np.abs(got[v].probs - truth[v].probs)) <= 1e-9


def test_no_evidence_full_communication_gives_priors():
    rng = np.random.default_rng(83)
    net = random_net(rng, 10)
    msbn = random_sectioning(rng, net, 3)
    ljf = compile_ljf(msbn)
    full_communication(ljf)
    truth = all_posteriors(net)
    for s in msbn.subnets:
        got = local_inference(ljf, s.id)
        for v in s.variables:
            assert np.max(np.abs(got[v].probs - truth[v].probs)) <= 1e-9


def test_dsepset_marginals_agree_after_full_communication():
    rng = np.random.default_rng(89)
    net = random_net(rng, 12)
    msbn = random_sectioning(rng, net, 3)
    ljf = compile_ljf(msbn)
    for sid, ev in scatter_evidence(rng, msbn, {0: 1, 5: 0}).items():
        enter_evidence(ljf, sid, ev)
    full_communication(ljf)
    for (a, b), linkage in ljf.linkages.items():
        pa = local_inference(ljf, a)
        pb = local_inference(ljf, b)
        for v in linkage.variables:
            np.testing.assert_allclose(pa[v].probs, pb[v].probs, atol=1e-9)


def test_sectioning_file_round_trip():
    net = star_net()
    msbn = star_sectioning(net)
    text = serialize_sectioning(msbn)
    again = parse_sectioning(text, net)
    assert serialize_sectioning(again) == text
    assert again.links == msbn.links


def test_sectioning_file_unknown_name_rejected():
    net = star_net()
    bad = "[subnets]\n0: v0 ghost\n[links]\n"
    with pytest.raises(NetworkFormatError, match="ghost"):
        parse_sectioning(bad, net)


def test_sectioning_file_bad_link_rejected():
    net = star_net()
    bad = "[subnets]\n0: v0 v1 v2 v3 v4\n[links]\n0 7\n"
    with pytest.raises(NetworkFormatError, match="undeclared"):
        parse_sectioning(bad, net)
