"""Deterministic discrete-event message network.

Time advances in integer ticks.  Each tick: due compromises are applied,
due envelopes delivered (refusals logged when an endpoint is isolated),
then every attached machine's ``on_tick`` runs in ascending host order,
and any zero-latency sends that produced are drained within the same
tick.  Every event gets a globally increasing sequence number, so the
trace is totally ordered and replays byte-identically for equal inputs.

Machines are plain objects with ``on_tick(sim, tick)`` and
``on_message(sim, envelope)``; ``set_behavior(behavior)`` is called if a
compromise injection targets the host and the machine supports it.
"""

import heapq
from dataclasses import dataclass, field

from sentinet.errors import (
    SenderIsolatedError,
    TickLimitExceededError,
    UnknownHostError,
)

_DRAIN_GUARD = 1_000_000


@dataclass(frozen=True)
class SimConfig:
    hosts: int
    seed: int = 0
    latency: int = 1
    tick_limit: int = 100_000


@dataclass(eq=False)
class Envelope:
    send_tick: int
    deliver_tick: int
    sender: int
    recipient: int
    payload: object
    label: str


@dataclass
class TraceLog:
    events: list = field(default_factory=list)

    def append(self, tick: int, seq: int, kind: str, details: str) -> None:
        self.events.append((tick, seq, kind, details))

    def to_text(self) -> str:
        return "".join(f"{t} {s} {k} {d}\n" for t, s, k, d in self.events)

    def lines(self, kind: str | None = None):
        return [e for e in self.events if kind is None or e[2] == kind]


class Simulator:
    def __init__(self, config: SimConfig):
        self.config = config
        self.tick = 0
        self.trace = TraceLog()
        self.isolated: set[int] = set()
        self._machines: dict[int, object] = {}
        self._heap: list = []
        self._seq = 0
        self._pending_compromise: list = []

    def _check_host(self, host: int) -> None:
        if not 0 <= host < self.config.hosts:
            raise UnknownHostError(f"no host {host} in a {self.config.hosts}-host network")

    def _next_seq(self) -> int:
        self._seq += 1
        return self._seq

    def attach(self, host: int, machine) -> None:
        self._check_host(host)
        self._machines[host] = machine

    def machine(self, host: int):
        return self._machines[host]

    def log_event(self, kind: str, details: str) -> None:
        self.trace.append(self.tick, self._next_seq(), kind, details)

    def schedule(self, sender: int, recipient: int, payload, label: str | None = None,
                 latency: int | None = None) -> Envelope:
        self._check_host(sender)
        self._check_host(recipient)
        if sender in self.isolated:
            raise SenderIsolatedError(f"host {sender} is isolated")
        if latency is None:
            latency = 0 if sender == recipient else self.config.latency
        if sender != recipient and latency < 1:
            raise ValueError("inter-host latency must be at least 1 tick")
        if label is None:
            label = type(payload).__name__
        env = Envelope(self.tick, self.tick + latency, sender, recipient, payload, label)
        seq = self._next_seq()
        self.trace.append(self.tick, seq, "send",
                          f"from={sender} to={recipient} at={env.deliver_tick} msg={label}")
        heapq.heappush(self._heap, (env.deliver_tick, seq, env))
        return env

    def isolate(self, host: int) -> None:
        self._check_host(host)
        if host in self.isolated:
            return
        self.isolated.add(host)
        self.log_event("isolate", f"host={host}")

    def inject_compromise(self, host: int, behavior, at_tick: int) -> None:
        self._check_host(host)
        if at_tick >= self.config.tick_limit:
            self.log_event("compromise_ignored",
                           f"host={host} at={at_tick} reason=beyond_tick_limit")
            return
        self._pending_compromise.append((at_tick, host, behavior))

    def _deliver_due(self) -> None:
        drained = 0
        while self._heap and self._heap[0][0] <= self.tick:
            _, _, env = heapq.heappop(self._heap)
            drained += 1
            if drained > _DRAIN_GUARD:
                raise TickLimitExceededError(
                    f"more than {_DRAIN_GUARD} deliveries in tick {self.tick}"
                )
            seq = self._next_seq()
            if env.sender in self.isolated or env.recipient in self.isolated:
                which = env.sender if env.sender in self.isolated else env.recipient
                self.trace.append(self.tick, seq, "refuse",
                                  f"from={env.sender} to={env.recipient} "
                                  f"msg={env.label} reason=isolated:{which}")
                continue
            self.trace.append(self.tick, seq, "deliver",
                              f"from={env.sender} to={env.recipient} msg={env.label}")
            machine = self._machines.get(env.recipient)
            if machine is not None:
                machine.on_message(self, env)

    def run(self, until: int) -> TraceLog:
        if until > self.config.tick_limit:
            raise TickLimitExceededError(
                f"run until {until} exceeds tick limit {self.config.tick_limit}"
            )
        while self.tick < until:
            for at, host, behavior in sorted(
                self._pending_compromise, key=lambda p: (p[0], p[1])
            ):
                if at == self.tick:
                    self.log_event("compromise", f"host={host} behavior={behavior}")
                    machine = self._machines.get(host)
                    if machine is not None and hasattr(machine, "set_behavior"):
                        machine.set_behavior(behavior)
            self._deliver_due()
            for host in sorted(self._machines):
                if host not in self.isolated:
                    self._machines[host].on_tick(self, self.tick)
            self._deliver_due()
            self.tick += 1
        return self.trace
