"""Multi-agent runtime on top of the simulated network.

One HostProcess per simulated host multiplexes the agents living there;
agents address each other by id and the runtime resolves ids to hosts.
Same-host traffic is delivered within the tick, cross-host traffic takes
network latency, exactly as the underlying scheduler defines.

Monitoring flow: system-monitoring agents observe variables and publish
point-mass beliefs to their subscribers every local period.  The
intrusion-monitoring agent of a subdomain absorbs those as evidence,
deliberates, and every inter-subdomain period ships its linkage joint to
the neighboring subdomains' agents.  Received linkage joints are checked
before absorption: a vector that is not a probability distribution marks
the sending host as suspect, and the accusation is broadcast so every
domain member can fold it into the next trust round.
"""

from dataclasses import dataclass, field

import numpy as np

from sentinet.agents.alerts import Alert, DetectionPolicy, decide, make_alert
from sentinet.agents.registry import AgentDescriptor, AgentKind, Registry, lookup, register_agent
from sentinet.agents.wire import (
    WireMessage,
    encode_message,
    format_beliefs,
    format_linkage,
    is_linkage_payload,
    parse_beliefs,
    parse_linkage,
    parse_message,
)
from sentinet.errors import DuplicateAgentIdError, UnknownAgentError
from sentinet.msbn import absorb_linkage, enter_evidence, linkage_message, local_inference

BELIEF_SUM_TOL = 1e-6


@dataclass
class HostProcess:
    host: int
    runtime: "AgentRuntime"
    agents: dict[str, "Agent"] = field(default_factory=dict)

    def on_tick(self, sim, tick):
        for aid in sorted(self.agents):
            self.agents[aid].on_tick(tick)

    def on_message(self, sim, envelope):
        msg = parse_message(envelope.payload)
        agent = self.agents.get(msg.recipient)
        if agent is None:
            sim.log_event("wire_dropped", f"unknown recipient {msg.recipient}")
            return
        agent.on_wire(msg)

    def set_behavior(self, behavior):
        for aid in sorted(self.agents):
            self.agents[aid].set_behavior(behavior)


class Agent:
    kind = AgentKind.SYSTEM_MONITORING

    def __init__(self, agent_id: str, host: int, subdomain: int = 0, variables=()):
        self.descriptor = AgentDescriptor(agent_id, host, subdomain, self.kind, tuple(variables))
        self.runtime: AgentRuntime | None = None
        self.behavior = "honest"

    @property
    def agent_id(self) -> str:
        return self.descriptor.agent_id

    @property
    def host(self) -> int:
        return self.descriptor.host

    def send(self, recipient: str, kind: str, payload: str = "") -> None:
        self.runtime.send_wire(self.agent_id, recipient, kind, payload)

    def set_behavior(self, behavior) -> None:
        self.behavior = behavior

    def on_tick(self, tick: int) -> None:
        pass

    def on_wire(self, msg: WireMessage) -> None:
        pass


class AgentRuntime:
    def __init__(self, sim, policy: DetectionPolicy | None = None):
        self.sim = sim
        self.policy = policy or DetectionPolicy()
        self.hosts: dict[int, HostProcess] = {}
        self.directory: dict[str, int] = {}
        self.subnet_agents: dict[int, str] = {}
        self.alerts: list[Alert] = []
        self._alert_seq = 0

    def add(self, agent: Agent) -> Agent:
        if agent.agent_id in self.directory:
            raise DuplicateAgentIdError(f"agent {agent.agent_id!r} already attached")
        hp = self.hosts.get(agent.host)
        if hp is None:
            hp = HostProcess(agent.host, self)
            self.hosts[agent.host] = hp
            self.sim.attach(agent.host, hp)
        hp.agents[agent.agent_id] = agent
        self.directory[agent.agent_id] = agent.host
        agent.runtime = self
        if isinstance(agent, IntrusionMonitoringAgent):
            self.subnet_agents[agent.subnet] = agent.agent_id
        return agent

    def agent(self, agent_id: str) -> Agent:
        host = self.directory.get(agent_id)
        if host is None:
            raise UnknownAgentError(f"no agent {agent_id!r}")
        return self.hosts[host].agents[agent_id]

    def send_wire(self, sender: str, recipient: str, kind: str, payload: str) -> None:
        if sender not in self.directory:
            raise UnknownAgentError(f"no agent {sender!r}")
        if recipient not in self.directory:
            raise UnknownAgentError(f"no agent {recipient!r}")
        line = encode_message(
            WireMessage(kind, sender, recipient, self.sim.tick, payload)
        )
        self.sim.schedule(self.directory[sender], self.directory[recipient], line, label=kind)

    def next_alert_id(self) -> int:
        self._alert_seq += 1
        return self._alert_seq

    def subscribe(self, subscriber: str, publisher: str, variables) -> None:
        """Ask publisher to stream beliefs for these variables."""
        vars_text = ",".join(str(v) for v in sorted(variables))
        self.agent(subscriber)  # existence check on both ends
        self.agent(publisher)
        self.send_wire(subscriber, publisher, "SUBSCRIBE", f"vars={vars_text}")


class RegistryAgent(Agent):
    kind = AgentKind.REGISTRY

    def __init__(self, agent_id: str, host: int):
        super().__init__(agent_id, host)
        self.registry = Registry()

    def on_wire(self, msg: WireMessage) -> None:
        if msg.kind == "REGISTER":
            fields = dict(p.split("=", 1) for p in msg.payload.split())
            vars_text = fields.get("vars", "")
            variables = tuple(int(v) for v in vars_text.split(",") if v)
            desc = AgentDescriptor(
                msg.sender,
                int(fields["host"]),
                int(fields["subdomain"]),
                AgentKind(fields["kind"]),
                variables,
            )
            try:
                register_agent(self.registry, desc)
            except DuplicateAgentIdError:
                self.runtime.sim.log_event("register_rejected", f"agent={msg.sender}")
        elif msg.kind == "LOOKUP":
            var = int(msg.payload.removeprefix("var="))
            hits = ",".join(f"{aid}@{host}" for aid, host in lookup(self.registry, var))
            self.send(msg.sender, "LOOKUP", f"var={var} result={hits}")


def register_on_wire(agent: Agent, registry_id: str) -> None:
    """Send the agent's own descriptor to a registry agent."""
    d = agent.descriptor
    vars_text = ",".join(str(v) for v in d.variables)
    agent.send(
        registry_id,
        "REGISTER",
        f"host={d.host} subdomain={d.subdomain} kind={d.kind.value} vars={vars_text}",
    )


class SystemMonitoringAgent(Agent):
    """Publishes observations of its variables as point-mass beliefs."""

    kind = AgentKind.SYSTEM_MONITORING

    def __init__(self, agent_id, host, subdomain, variables, arities, feed=None):
        super().__init__(agent_id, host, subdomain, variables)
        self.arities = dict(arities)
        self.feed = {int(t): dict(obs) for t, obs in (feed or {}).items()}
        self.current: dict[int, int] = {}
        self.subscribers: dict[str, tuple[int, ...]] = {}
        self.seq = 0

    def observe(self, observations: dict[int, int]) -> None:
        self.current.update(observations)

    def on_wire(self, msg: WireMessage) -> None:
        if msg.kind == "SUBSCRIBE":
            wanted = tuple(
                int(v)
                for v in msg.payload.removeprefix("vars=").split(",")
                if v and int(v) in self.descriptor.variables
            )
            self.subscribers[msg.sender] = wanted

    def on_tick(self, tick: int) -> None:
        if tick in self.feed:
            self.observe(self.feed[tick])
        if not self.current or tick % self.runtime.policy.local_period != 0:
            return
        for sub in sorted(self.subscribers):
            wanted = [v for v in self.subscribers[sub] if v in self.current]
            if not wanted:
                continue
            beliefs = {}
            for v in wanted:
                point = np.zeros(self.arities[v], dtype=np.float64)
                point[self.current[v]] = 1.0
                beliefs[v] = point
            self.seq += 1
            self.send(sub, "BELIEF", format_beliefs(self.seq, beliefs))


class IntrusionMonitoringAgent(Agent):
    """Carries one subdomain's inference state and trust bookkeeping."""

    kind = AgentKind.INTRUSION_MONITORING

    def __init__(self, agent_id, host, ljf, subnet, class_states=(), class_var=0, admin_id=None):
        spec = ljf.msbn.subnet(subnet)
        super().__init__(agent_id, host, subnet, spec.variables)
        self.ljf = ljf
        self.subnet = subnet
        self.class_states = tuple(class_states)
        self.class_var = class_var
        self.admin_id = admin_id
        self.assessments: dict[int, int] = {}
        self.alerts: list[Alert] = []
        self.seq = 0
        self.inter_sends = 0

    # -- beliefs --------------------------------------------------------

    def on_wire(self, msg: WireMessage) -> None:
        if msg.kind == "BELIEF":
            if is_linkage_payload(msg.payload):
                self._on_linkage(msg)
            else:
                self._on_observations(msg)
        elif msg.kind == "TRUST":
            fields = dict(p.split("=", 1) for p in msg.payload.split())
            self.assessments[int(fields["subject"])] = int(fields["status"])

    def _on_observations(self, msg: WireMessage) -> None:
        _, beliefs = parse_beliefs(msg.payload)
        here = set(self.descriptor.variables)
        evidence = {
            v: int(np.argmax(probs)) for v, probs in beliefs.items() if v in here
        }
        if evidence:
            enter_evidence(self.ljf, self.subnet, evidence)
            self.deliberate()

    def _on_linkage(self, msg: WireMessage) -> None:
        _, src, dst, joint = parse_linkage(msg.payload)
        sender_host = self.runtime.directory.get(msg.sender)
        link = (min(src, dst), max(src, dst))
        expected = self.ljf.linkages.get(link)
        bad = (
            dst != self.subnet
            or expected is None
            or joint.shape != expected.store(src, dst).shape
            or np.any(joint < 0.0)
            or abs(float(joint.sum()) - 1.0) > BELIEF_SUM_TOL
        )
        if bad:
            self.runtime.sim.log_event(
                "belief_rejected", f"by={self.agent_id} from={msg.sender}"
            )
            if sender_host is not None:
                self._accuse(sender_host)
            return
        absorb_linkage(self.ljf, src, dst, joint)
        self.deliberate()

    def _accuse(self, suspect_host: int) -> None:
        self.assessments[suspect_host] = 1
        for aid in sorted(self.runtime.directory):
            if aid == self.agent_id:
                continue
            target = self.runtime.agent(aid)
            if isinstance(target, IntrusionMonitoringAgent):
                self.send(aid, "TRUST", f"subject={suspect_host} status=1")

    def on_tick(self, tick: int) -> None:
        if tick == 0 or tick % self.runtime.policy.inter_period != 0:
            return
        spec = self.ljf.msbn.subnet(self.subnet)
        for nb in spec.neighbors:
            peer = self.runtime.subnet_agents.get(nb)
            if peer is None:
                continue
            joint = linkage_message(self.ljf, self.subnet, nb)
            if self.behavior == "skew":
                # a compromised agent ships a vector that is not a
                # distribution; receivers catch it by checksum
                joint = joint * np.linspace(1.0, 3.0, joint.size)
            self.seq += 1
            self.inter_sends += 1
            self.send(peer, "BELIEF", format_linkage(self.seq, self.subnet, nb, joint))

    # -- deliberation ---------------------------------------------------

    def deliberate(self, extra_evidence: dict[int, int] | None = None):
        """Update local beliefs; raise an alert when the class posterior
        says so.  Subdomains that do not host the class variable just
        refresh their beliefs."""
        if extra_evidence:
            enter_evidence(self.ljf, self.subnet, extra_evidence)
        posteriors = local_inference(self.ljf, self.subnet)
        if self.class_var not in posteriors or not self.class_states:
            return posteriors, None
        probs = posteriors[self.class_var].probs
        posterior = {c: float(p) for c, p in zip(self.class_states, probs)}
        decision = decide(posterior, self.runtime.policy)
        alert = make_alert(
            self.runtime.next_alert_id(),
            decision,
            posterior,
            self.agent_id,
            self.runtime.sim.tick,
        )
        if alert is not None:
            self.alerts.append(alert)
            self.runtime.alerts.append(alert)
            cls = alert.attack_class if alert.attack_class else "-"
            self.runtime.sim.log_event(
                "alert", f"agent={self.agent_id} kind={alert.kind} class={cls}"
            )
            if self.admin_id is not None:
                self.send(self.admin_id, "ALERT", f"kind={alert.kind} class={cls}")
        return posteriors, alert
