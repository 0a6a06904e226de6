"""Distributed trust manager: n parallel agreement instances per round.

Every host leads one instance, broadcasting its own status (honest hosts
report 0).  The combined verdict for a leader folds together what the
safe hosts received and the majority of the peer assessments about that
leader:

- contradictory values anywhere: compromised (two-faced leader);
- silence: compromised or dead;
- a value that provably skipped some host (received only via relay):
  compromised (selective send);
- self-report 1: compromised when a majority assessed the leader as
  behaving normally (the self-report contradicts the majority),
  otherwise undetermined;
- self-report 0: compromised when a majority assessed it as misbehaving,
  otherwise safe.

``literal_first_case`` switches the first rule family to the reading in
which a unanimous 0 broadcast is itself treated as evidence of
compromise; it exists for comparison runs and is off by default.
"""

from dataclasses import dataclass, field
from enum import Enum

from sentinet.errors import MajorityAssumptionViolatedError, UnknownHostError
from sentinet.simnet import SimConfig, Simulator
from sentinet.trust.signatures import KeyRing
from sentinet.trust.sma import Honest, SmaMachine, Verdict, choice


class HostVerdict(Enum):
    SAFE = "Safe"
    COMPROMISED = "Compromised"
    UNDETERMINED = "Undetermined"


@dataclass
class TrustDomain:
    hosts: int
    policy: str = "default"
    verdicts: dict[int, HostVerdict] = field(default_factory=dict)
    isolated: set[int] = field(default_factory=set)

    def members(self) -> range:
        return range(self.hosts)


def isolate(domain: TrustDomain, host: int, sim: Simulator | None = None) -> TrustDomain:
    """Cut a host off; repeat calls are no-ops."""
    if host not in domain.members():
        raise UnknownHostError(f"no host {host} in this domain")
    domain.isolated.add(host)
    if sim is not None:
        sim.isolate(host)
    return domain


@dataclass
class DtmOutcome:
    verdicts: dict[int, HostVerdict]
    isolation: set[int]
    choices: dict[int, dict[int, Verdict]]
    trace: object


def _majority(votes: list[int], value: int) -> bool:
    return sum(1 for v in votes if v == value) * 2 > len(votes)


def combine_verdict(instance_choice: Verdict, omission: bool, assessments: list[int],
                    literal_first_case: bool = False) -> HostVerdict:
    """Fold one instance's outcome with the majority opinion on its leader."""
    if instance_choice is Verdict.LEADER_CONTRADICTORY:
        return HostVerdict.COMPROMISED
    if instance_choice is Verdict.LEADER_SILENT:
        return HostVerdict.COMPROMISED
    if omission:
        return HostVerdict.COMPROMISED
    if instance_choice is Verdict.LEADER_REPORTS_COMPROMISED:
        if _majority(assessments, 0):
            return HostVerdict.COMPROMISED
        return HostVerdict.UNDETERMINED
    # leader reports safe
    if literal_first_case:
        return HostVerdict.COMPROMISED
    if _majority(assessments, 1):
        return HostVerdict.COMPROMISED
    return HostVerdict.SAFE


def dtm_round(domain: TrustDomain, behaviors: dict[int, object],
              local_assessments: dict[int, dict[int, int]], seed: int = 0,
              literal_first_case: bool = False) -> DtmOutcome:
    """Run all n instances in one simulation and fold the verdicts."""
    n = domain.hosts
    configured_bad = [h for h in range(n) if not isinstance(behaviors.get(h, Honest()), Honest)]
    if len(configured_bad) > (n - 1) // 2:
        raise MajorityAssumptionViolatedError(
            f"{len(configured_bad)} of {n} hosts configured compromised; "
            f"the protocol assumes at most {(n - 1) // 2}"
        )

    keyring = KeyRing(n, seed)
    sim = Simulator(SimConfig(hosts=n, seed=seed, tick_limit=n + 2))
    machines = {}
    for h in range(n):
        m = SmaMachine(h, n, keyring, behaviors.get(h, Honest()))
        m.leads[h] = 0
        machines[h] = m
        sim.attach(h, m)
    for h in sorted(domain.isolated):
        sim.isolate(h)
    trace = sim.run(n + 1)

    safe_hosts = [h for h in range(n) if isinstance(behaviors.get(h, Honest()), Honest)]
    verdicts = {}
    choices = {}
    for leader in range(n):
        observers = [h for h in safe_hosts if h != leader]
        choices[leader] = {h: choice(machines[h].values_for(leader)) for h in observers}
        agreed = set(choices[leader].values())
        instance_choice = agreed.pop() if len(agreed) == 1 else Verdict.LEADER_CONTRADICTORY
        omission = any(
            machines[h].values_for(leader)
            and not machines[h].direct_from_leader.get(leader, False)
            for h in observers
        )
        assessments = [
            local_assessments.get(h, {}).get(leader, 0)
            for h in range(n)
            if h != leader
        ]
        verdicts[leader] = combine_verdict(
            instance_choice, omission, assessments, literal_first_case
        )
        sim.log_event(
            "verdict",
            f"host={leader} choice={instance_choice.value} "
            f"omission={'yes' if omission else 'no'} verdict={verdicts[leader].value}",
        )

    isolation = {h for h, v in verdicts.items() if v is HostVerdict.COMPROMISED}
    for h in sorted(isolation):
        isolate(domain, h, sim)
    domain.verdicts.update(verdicts)
    return DtmOutcome(verdicts, isolation, choices, sim.trace)
