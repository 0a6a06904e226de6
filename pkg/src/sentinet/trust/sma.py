"""Signed-message agreement over the simulated network.

One instance is identified by its leader's host id.  At tick 0 the
leader sends its signed status value to every other host.  A host that
accepts a value it has not seen before countersigns and relays it once
to every host whose signature is not yet on the chain; duplicates are
ignored.  After n delivery rounds each host maps its received-value set
through choice().  Relay-once deduplication caps traffic at
2n(n-1) + (n-1) messages per instance, the O(n^2) budget.

Adversary behaviors cover the interesting failure shapes: staying mute,
always sending a fixed value, telling different recipients different
things (or skipping some), and probabilistically dropping relays.
"""

import random
from dataclasses import dataclass, field
from enum import Enum

from sentinet.simnet import SimConfig, Simulator
from sentinet.trust.signatures import KeyRing, SignedOrder


class Honest:
    def __str__(self):
        return "honest"


class Silent:
    def __str__(self):
        return "silent"


class ConstantLie:
    """Lead with a fixed value; relay only orders carrying that value."""

    def __init__(self, value: int):
        self.value = value

    def __str__(self):
        return f"constant_lie:{self.value}"


class SplitSend:
    """Lead with per-recipient values; None skips a recipient entirely."""

    def __init__(self, values: dict[int, int | None]):
        self.values = dict(values)

    def __str__(self):
        parts = ",".join(
            f"{r}={'skip' if v is None else v}" for r, v in sorted(self.values.items())
        )
        return f"split_send:{parts}"


class DropRelay:
    """Lead honestly but drop each relay send with fixed probability."""

    def __init__(self, probability: float, seed: int = 0):
        self.probability = probability
        self.seed = seed
        self._rng = random.Random(seed)

    def drops_next(self) -> bool:
        return self._rng.random() < self.probability

    def __str__(self):
        return f"drop_relay:{self.probability}:{self.seed}"


class Verdict(Enum):
    LEADER_SILENT = "LeaderSilent"
    LEADER_REPORTS_SAFE = "LeaderReportsSafe"
    LEADER_REPORTS_COMPROMISED = "LeaderReportsCompromised"
    LEADER_CONTRADICTORY = "LeaderContradictory"


def choice(values: set[int]) -> Verdict:
    """Map a host's received-value set to the instance verdict."""
    if not values:
        return Verdict.LEADER_SILENT
    if values == {0}:
        return Verdict.LEADER_REPORTS_SAFE
    if values == {1}:
        return Verdict.LEADER_REPORTS_COMPROMISED
    return Verdict.LEADER_CONTRADICTORY


@dataclass(eq=False)
class SmaMachine:
    """Per-host protocol state across all instances it participates in."""

    host: int
    hosts: int
    keyring: KeyRing
    behavior: object
    leads: dict[int, int] = field(default_factory=dict)
    received: dict[int, set] = field(default_factory=dict)
    direct_from_leader: dict[int, bool] = field(default_factory=dict)

    def set_behavior(self, behavior) -> None:
        self.behavior = behavior

    def values_for(self, instance: int) -> set:
        return self.received.setdefault(instance, set())

    def _send(self, sim: Simulator, recipient: int, instance: int, order: SignedOrder) -> None:
        sim.schedule(
            self.host,
            recipient,
            (instance, order),
            label=f"order i={instance} v={order.value} len={len(order.chain)}",
        )

    def on_tick(self, sim: Simulator, tick: int) -> None:
        if tick != 0:
            return
        for instance, value in sorted(self.leads.items()):
            self._lead(sim, instance, value)

    def _lead(self, sim: Simulator, instance: int, value: int) -> None:
        b = self.behavior
        if isinstance(b, Silent):
            return
        for r in range(self.hosts):
            if r == self.host:
                continue
            v = value
            if isinstance(b, ConstantLie):
                v = b.value
            elif isinstance(b, SplitSend):
                v = b.values.get(r, value)
                if v is None:
                    continue
            self._send(sim, r, instance, self.keyring.initial(self.host, v))

    def on_message(self, sim: Simulator, env) -> None:
        instance, order = env.payload
        if isinstance(self.behavior, Silent):
            return
        if not self.keyring.verify(order):
            sim.log_event("drop_invalid", f"host={self.host} i={instance} reason=bad_chain")
            return
        hosts = order.hosts()
        if hosts[0] != instance or self.host in hosts:
            sim.log_event("drop_invalid", f"host={self.host} i={instance} reason=bad_route")
            return
        if len(hosts) == 1:
            self.direct_from_leader[instance] = True
        seen = self.values_for(instance)
        if order.value in seen:
            return
        seen.add(order.value)
        self._relay(sim, instance, order)

    def _relay(self, sim: Simulator, instance: int, order: SignedOrder) -> None:
        b = self.behavior
        if isinstance(b, ConstantLie) and order.value != b.value:
            return
        extended = self.keyring.extend(order, self.host)
        on_chain = set(extended.hosts())
        for r in range(self.hosts):
            if r == self.host or r in on_chain:
                continue
            if isinstance(b, DropRelay) and b.drops_next():
                sim.log_event("relay_dropped", f"host={self.host} i={instance} to={r}")
                continue
            self._send(sim, r, instance, extended)


@dataclass
class SmaRun:
    leader: int
    values: dict[int, set]
    decisions: dict[int, Verdict]
    direct_from_leader: dict[int, bool]
    message_count: int
    trace: object


def message_budget(n: int) -> int:
    """Worst-case sends for one instance under relay-once dedup."""
    return 2 * n * (n - 1) + (n - 1)


def run_sma(leader: int, hosts: int, behaviors: dict[int, object], leader_value: int,
            seed: int = 0) -> SmaRun:
    """Execute one instance for n delivery rounds; report every host's view."""
    keyring = KeyRing(hosts, seed)
    sim = Simulator(SimConfig(hosts=hosts, seed=seed, tick_limit=hosts + 2))
    machines = {}
    for h in range(hosts):
        m = SmaMachine(h, hosts, keyring, behaviors.get(h, Honest()))
        machines[h] = m
        sim.attach(h, m)
    machines[leader].leads[leader] = leader_value
    trace = sim.run(hosts + 1)
    return SmaRun(
        leader=leader,
        values={h: set(machines[h].values_for(leader)) for h in range(hosts)},
        decisions={h: choice(machines[h].values_for(leader)) for h in range(hosts)},
        direct_from_leader={
            h: machines[h].direct_from_leader.get(leader, False) for h in range(hosts)
        },
        message_count=len(trace.lines("send")),
        trace=trace,
    )
