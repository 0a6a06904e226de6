import pytest

from sentinet.errors import (
    MajorityAssumptionViolatedError,
    NetworkFormatError,
    UnknownHostError,
)
from sentinet.trust import (
    ConstantLie,
    DropRelay,
    Honest,
    HostVerdict,
    KeyRing,
    Silent,
    SignedOrder,
    SplitSend,
    TrustDomain,
    Verdict,
    choice,
    dtm_round,
    isolate,
    message_budget,
    parse_scenario,
    run_scenario,
    run_sma,
)


def test_sign_then_verify():
    ring = KeyRing(3, seed=5)
    order = ring.extend(ring.initial(0, 1), 2)
    assert ring.verify(order)


def test_value_flip_breaks_chain():
    ring = KeyRing(3, seed=5)
    order = ring.initial(0, 0)
    assert not ring.verify(SignedOrder(1, order.chain))


def test_forged_entry_rejected():
    ring = KeyRing(3, seed=5)
    order = ring.initial(0, 0)
    forged = SignedOrder(0, order.chain + ((1, "deadbeef"),))
    assert not ring.verify(forged)


def test_duplicate_host_in_chain_rejected():
    ring = KeyRing(3, seed=5)
    order = ring.initial(0, 0)
    doubled = SignedOrder(0, order.chain + order.chain)
    assert not ring.verify(doubled)


def test_choice_covers_all_value_sets():
    assert choice(set()) is Verdict.LEADER_SILENT
    assert choice({0}) is Verdict.LEADER_REPORTS_SAFE
    assert choice({1}) is Verdict.LEADER_REPORTS_COMPROMISED
    assert choice({0, 1}) is Verdict.LEADER_CONTRADICTORY


def test_all_honest_run():
    run = run_sma(leader=0, hosts=4, behaviors={}, leader_value=0)
    for h in range(1, 4):
        assert run.values[h] == {0}
        assert run.decisions[h] is Verdict.LEADER_REPORTS_SAFE
    # leader sends 3, each recipient relays its first copy to the 2
    # hosts outside the chain, later copies are duplicates
    assert run.message_count == 9
    assert run.message_count <= message_budget(4)


def test_two_faced_leader_detected_by_everyone():
    behaviors = {0: SplitSend({1: 0, 2: 1, 3: 0})}
    run = run_sma(leader=0, hosts=4, behaviors=behaviors, leader_value=0)
    for h in range(1, 4):
        assert run.values[h] == {0, 1}
        assert run.decisions[h] is Verdict.LEADER_CONTRADICTORY


def test_skipped_host_learns_value_through_relay():
    behaviors = {0: SplitSend({1: 1, 2: None, 3: None})}
    run = run_sma(leader=0, hosts=4, behaviors=behaviors, leader_value=1)
    assert run.values[2] == {1}
    assert run.direct_from_leader[1]
    assert not run.direct_from_leader[2]
    assert not run.direct_from_leader[3]


def test_honest_leader_valid_despite_traitor_relays():
    for traitors in ({1: ConstantLie(1)}, {2: Silent()}, {3: DropRelay(0.9, seed=4)}):
        run = run_sma(leader=0, hosts=5, behaviors=traitors, leader_value=0)
        for h in range(1, 5):
            if isinstance(traitors.get(h, Honest()), Honest):
                assert run.values[h] == {0}, (traitors, h)


def test_impersonated_leader_chain_dropped():
    """A chain not starting at the instance leader never enters any V."""
    behaviors = {2: ConstantLie(1)}
    run = run_sma(leader=0, hosts=4, behaviors=behaviors, leader_value=0)
    for h in range(1, 4):
        if h != 2:
            assert run.values[h] == {0}
    dropped = run.trace.lines("drop_invalid")
    assert all("bad" in d for *_, d in dropped) or dropped == []


def test_silent_leader_yields_silence_everywhere():
    run = run_sma(leader=0, hosts=4, behaviors={0: Silent()}, leader_value=0)
    for h in range(1, 4):
        assert run.values[h] == set()
        assert run.decisions[h] is Verdict.LEADER_SILENT


def test_message_bound_holds_for_adversarial_runs():
    cases = [
        {0: SplitSend({1: 0, 2: 1, 3: 1, 4: 0})},
        {1: ConstantLie(1), 2: ConstantLie(0)},
        {3: DropRelay(0.5, seed=9)},
    ]
    for behaviors in cases:
        run = run_sma(leader=0, hosts=5, behaviors=behaviors, leader_value=0)
        assert run.message_count <= message_budget(5)


def test_dtm_all_honest_isolates_nobody():
    domain = TrustDomain(hosts=4)
    outcome = dtm_round(domain, {}, {})
    assert outcome.isolation == set()
    assert all(v is HostVerdict.SAFE for v in outcome.verdicts.values())


def test_dtm_silent_host_is_isolated():
    domain = TrustDomain(hosts=4)
    outcome = dtm_round(domain, {1: Silent()}, {})
    assert outcome.verdicts[1] is HostVerdict.COMPROMISED
    assert outcome.isolation == {1}
    assert domain.isolated == {1}


def test_dtm_selective_sender_is_isolated():
    domain = TrustDomain(hosts=4)
    behaviors = {2: SplitSend({0: 1, 1: None, 3: None})}
    outcome = dtm_round(domain, behaviors, {})
    assert outcome.verdicts[2] is HostVerdict.COMPROMISED


def test_dtm_self_report_contradicting_majority():
    domain = TrustDomain(hosts=5)
    outcome = dtm_round(domain, {2: ConstantLie(1)}, {})
    # everyone assesses 2 as normal (default 0), so the broadcast 1
    # contradicts the majority
    assert outcome.verdicts[2] is HostVerdict.COMPROMISED


def test_dtm_self_report_matching_majority_is_undetermined():
    domain = TrustDomain(hosts=5)
    assessments = {h: {2: 1} for h in range(5) if h != 2}
    outcome = dtm_round(domain, {2: ConstantLie(1)}, assessments)
    assert outcome.verdicts[2] is HostVerdict.UNDETERMINED
    assert 2 not in outcome.isolation


def test_dtm_safe_report_against_majority_suspicion():
    domain = TrustDomain(hosts=5)
    assessments = {h: {3: 1} for h in range(5) if h != 3}
    outcome = dtm_round(domain, {}, assessments)
    assert outcome.verdicts[3] is HostVerdict.COMPROMISED


def test_dtm_literal_first_case_flag():
    domain = TrustDomain(hosts=4)
    outcome = dtm_round(domain, {}, {}, literal_first_case=True)
    assert all(v is HostVerdict.COMPROMISED for v in outcome.verdicts.values())


def test_dtm_rejects_compromised_majority():
    domain = TrustDomain(hosts=4)
    with pytest.raises(MajorityAssumptionViolatedError):
        dtm_round(domain, {1: Silent(), 2: Silent()}, {})


def test_isolate_unknown_host():
    with pytest.raises(UnknownHostError):
        isolate(TrustDomain(hosts=3), 7)


def test_isolate_idempotent():
    domain = TrustDomain(hosts=3)
    isolate(domain, 1)
    isolate(domain, 1)
    assert domain.isolated == {1}


def test_isolated_host_messages_refused_in_later_rounds():
    domain = TrustDomain(hosts=4)
    isolate(domain, 3)
    outcome = dtm_round(domain, {}, {})
    for _, _, kind, details in outcome.trace.events:
        if kind == "deliver":
            assert "from=3" not in details and "to=3" not in details
    assert outcome.verdicts[3] is HostVerdict.COMPROMISED


def test_dtm_trace_is_reproducible():
    def once():
        domain = TrustDomain(hosts=5)
        behaviors = {1: SplitSend({0: 1, 2: None}), 4: DropRelay(0.3, seed=2)}
        return dtm_round(domain, behaviors, {}, seed=11).trace.to_text()

    assert once() == once()


SCENARIO = """\
hosts 4
seed 7
behavior 1 silent
assess 0 1 1
expect 1 compromised
expect 0 safe
"""


def test_scenario_parse_and_run():
    sc = parse_scenario(SCENARIO)
    assert sc.hosts == 4
    assert isinstance(sc.behaviors[1], Silent)
    result = run_scenario(sc)
    assert result.ok, result.mismatches


def test_scenario_split_send_syntax():
    sc = parse_scenario("hosts 4\nbehavior 0 split_send 1=0 2=skip 3=1\n")
    b = sc.behaviors[0]
    assert isinstance(b, SplitSend)
    assert b.values == {1: 0, 2: None, 3: 1}


def test_scenario_rejects_unknown_directive():
    with pytest.raises(NetworkFormatError, match="directive"):
        parse_scenario("hosts 4\nflavor 1 vanilla\n")


def test_scenario_rejects_bad_behavior():
    with pytest.raises(NetworkFormatError, match="behavior"):
        parse_scenario("hosts 4\nbehavior 1 wobbly\n")


def test_scenario_requires_hosts():
    with pytest.raises(NetworkFormatError, match="hosts"):
        parse_scenario("seed 3\n")


def test_scenario_rejects_out_of_range_host():
    with pytest.raises(NetworkFormatError, match="outside"):
        parse_scenario("hosts 3\nbehavior 5 silent\n")
