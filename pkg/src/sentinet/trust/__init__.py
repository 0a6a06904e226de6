from sentinet.trust.dtm import (
    DtmOutcome,
    HostVerdict,
    TrustDomain,
    combine_verdict,
    dtm_round,
    isolate,
)
from sentinet.trust.scenario import Scenario, ScenarioResult, parse_scenario, run_scenario
from sentinet.trust.signatures import KeyRing, SignedOrder
from sentinet.trust.sma import (
    ConstantLie,
    DropRelay,
    Honest,
    Silent,
    SmaMachine,
    SmaRun,
    SplitSend,
    Verdict,
    choice,
    message_budget,
    run_sma,
)

__all__ = [
    "ConstantLie",
    "DropRelay",
    "DtmOutcome",
    "Honest",
    "HostVerdict",
    "KeyRing",
    "Scenario",
    "ScenarioResult",
    "Silent",
    "SignedOrder",
    "SmaMachine",
    "SmaRun",
    "SplitSend",
    "TrustDomain",
    "Verdict",
    "choice",
    "combine_verdict",
    "dtm_round",
    "isolate",
    "message_budget",
    "parse_scenario",
    "run_scenario",
    "run_sma",
]
