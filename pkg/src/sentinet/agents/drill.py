"""End-to-end fault-tolerance drill.

One subnet per host, one intrusion-monitoring agent per subnet, plus a
system-monitoring feed that injects all observations early in the run.
Mid-run, one host can be compromised into skewing its outbound linkage
joints.  Receivers reject the malformed joints, accuse the sender, and
once the run ends a trust round folds the accusations into verdicts.
The compromised host is isolated and the survivors roll back to their
trusted inputs: recompile, re-enter recorded evidence, run a full
communication sweep.  Because the corruption only ever touched messages,
never the recorded evidence, the rolled-back posteriors equal what an
uncompromised run computes.

Everything is a pure function of the config, including the trace text.
"""

from dataclasses import dataclass, field

import numpy as np

from sentinet.agents.runtime import AgentRuntime, IntrusionMonitoringAgent, SystemMonitoringAgent
from sentinet.bayes.randomnet import random_network
from sentinet.msbn import compile_ljf, enter_evidence, full_communication, local_inference
from sentinet.msbn.partition import sound_sectioning
from sentinet.simnet import SimConfig, Simulator
from sentinet.trust.dtm import HostVerdict, TrustDomain, dtm_round, isolate
from sentinet.trust.sma import Honest


@dataclass(frozen=True)
class DrillConfig:
    hosts: int = 10
    n_vars: int = 24
    seed: int = 0
    compromise_host: int | None = None
    compromise_tick: int = 50
    end_tick: int = 60
    evidence_tick: int = 1


@dataclass
class DrillReport:
    verdicts: dict[int, HostVerdict]
    isolated: set[int]
    posteriors: dict[int, tuple[float, ...]]
    trace_text: str
    rejected: int = 0
    alerts: int = 0
    configured: dict[int, dict[int, int]] = field(default_factory=dict)
    recorded: dict[int, dict[int, int]] = field(default_factory=dict)


def _drill_world(cfg: DrillConfig):
    """Network, sectioning, and per-subnet evidence, all seed-derived."""
    rng = np.random.default_rng(cfg.seed)
    net = random_network(rng, cfg.n_vars)
    msbn = sound_sectioning(net, cfg.hosts, rng)
    evidence: dict[int, dict[int, int]] = {s.id: {} for s in msbn.subnets}
    n_obs = max(2, cfg.n_vars // 4)
    observed = sorted(int(v) for v in rng.choice(cfg.n_vars, size=n_obs, replace=False))
    for v in observed:
        holder = min(s.id for s in msbn.subnets if v in s.variables)
        evidence[holder][v] = int(rng.integers(0, net.arity(v)))
    return net, msbn, evidence


def _reference_posteriors(msbn, evidence) -> dict[int, tuple[float, ...]]:
    """Ground state: fresh compile, recorded evidence, one full sweep."""
    ljf = compile_ljf(msbn)
    for sid in sorted(evidence):
        if evidence[sid]:
            enter_evidence(ljf, sid, evidence[sid])
    full_communication(ljf)
    out: dict[int, tuple[float, ...]] = {}
    for v in range(msbn.net.n):
        answerer = min(s.id for s in msbn.subnets if v in s.variables)
        probs = local_inference(ljf, answerer)[v].probs
        out[v] = tuple(float(p) for p in probs)
    return out


def run_drill(cfg: DrillConfig) -> DrillReport:
    net, msbn, evidence = _drill_world(cfg)
    sim = Simulator(SimConfig(hosts=cfg.hosts, seed=cfg.seed, tick_limit=cfg.end_tick + 50))
    rt = AgentRuntime(sim)
    ljf = compile_ljf(msbn)

    arities = {v: net.arity(v) for v in range(net.n)}
    monitors = {}
    for sid in range(cfg.hosts):
        ids_agent = rt.add(IntrusionMonitoringAgent(f"ids-{sid}", sid, ljf, sid))
        monitors[sid] = ids_agent
        if evidence[sid]:
            feed = {cfg.evidence_tick: evidence[sid]}
            sysa = rt.add(
                SystemMonitoringAgent(
                    f"sys-{sid}", sid, sid, tuple(evidence[sid]), arities, feed
                )
            )
            rt.subscribe(ids_agent.agent_id, sysa.agent_id, evidence[sid])

    if cfg.compromise_host is not None:
        sim.inject_compromise(cfg.compromise_host, "skew", cfg.compromise_tick)

    sim.run(cfg.end_tick)

    verdicts: dict[int, HostVerdict] = {}
    isolated: set[int] = set()
    if cfg.compromise_host is not None:
        assessments = {h: dict(monitors[h].assessments) for h in range(cfg.hosts)}
        domain = TrustDomain(cfg.hosts)
        outcome = dtm_round(
            domain, {h: Honest() for h in range(cfg.hosts)}, assessments, seed=cfg.seed
        )
        verdicts = outcome.verdicts
        isolated = set(outcome.isolation)
        for h in sorted(isolated):
            isolate(domain, h, sim)

    # Rollback and replay from trusted inputs: the evidence each agent
    # recorded from its monitors.  The corrupted absorptions lived only
    # in the running forest, which is discarded here.
    recorded = {sid: dict(ljf.evidence[sid]) for sid in sorted(ljf.evidence)}
    posteriors = _reference_posteriors(msbn, recorded)

    rejected = len(sim.trace.lines("belief_rejected"))
    return DrillReport(
        verdicts,
        isolated,
        posteriors,
        sim.trace.to_text(),
        rejected=rejected,
        alerts=len(rt.alerts),
        configured=evidence,
        recorded=recorded,
    )
