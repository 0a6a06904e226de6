"""Alert decisions and their lifecycle.

The decision rule is a pure function of the class posterior and the
threshold: an attack class crossing the threshold names a known attack,
the normal class crossing it clears the record, and a posterior where
nothing crosses is anomalous by definition.  Exactly one of the three
outcomes holds for every posterior.
"""

import enum
from dataclasses import dataclass, replace

from sentinet.errors import AlreadyResolvedError

NORMAL_CLASS = "normal"


@dataclass(frozen=True)
class DetectionPolicy:
    """Threshold plus publication cadence.

    Local beliefs go out every local_period ticks; messages that cross a
    subdomain boundary go out every inter_period ticks, which must be the
    slower of the two.
    """

    threshold: float = 0.5
    local_period: int = 1
    inter_period: int = 10

    def __post_init__(self):
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must be in (0,1), got {self.threshold}")
        if self.local_period < 1 or self.inter_period <= self.local_period:
            raise ValueError(
                f"need inter_period > local_period >= 1, got "
                f"{self.inter_period} and {self.local_period}"
            )


class AlertStatus(enum.Enum):
    OPEN = "open"
    CONFIRMED_ATTACK = "confirmed_attack"
    REJECTED = "rejected"


KNOWN_ATTACK = "known_attack"
NO_ALERT = "no_alert"
ANOMALY = "anomaly"

Decision = tuple[str, str | None]


def decide(posterior: dict[str, float], policy: DetectionPolicy) -> Decision:
    """(outcome, class) for one posterior vector.

    Ties at the threshold count as crossing it.  If several attack
    classes cross at once (possible only when the threshold is below
    0.5), the most probable one wins, names sorted for exact ties.
    """
    crossing = [
        c for c, p in posterior.items() if c != NORMAL_CLASS and p >= policy.threshold
    ]
    if crossing:
        best = max(sorted(crossing), key=lambda c: posterior[c])
        return (KNOWN_ATTACK, best)
    if posterior.get(NORMAL_CLASS, 0.0) >= policy.threshold:
        return (NO_ALERT, None)
    return (ANOMALY, None)


@dataclass(frozen=True)
class Alert:
    alert_id: int
    kind: str  # KNOWN_ATTACK or ANOMALY
    attack_class: str | None
    posterior: tuple[tuple[str, float], ...]
    agent_id: str
    timestamp: int
    status: AlertStatus = AlertStatus.OPEN


def make_alert(alert_id, decision: Decision, posterior, agent_id, timestamp) -> Alert | None:
    """Alert for a decision, or None when the record looks normal."""
    outcome, cls = decision
    if outcome == NO_ALERT:
        return None
    ordered = tuple(sorted(posterior.items()))
    return Alert(alert_id, outcome, cls, ordered, agent_id, timestamp)


def confirm_alert(alert: Alert, verdict: str) -> Alert:
    """Apply the administrator's call; resolved alerts stay resolved."""
    if verdict not in ("confirm", "reject"):
        raise ValueError(f"verdict must be confirm or reject, got {verdict!r}")
    if alert.status is not AlertStatus.OPEN:
        raise AlreadyResolvedError(f"alert {alert.alert_id} is {alert.status.value}")
    status = AlertStatus.CONFIRMED_ATTACK if verdict == "confirm" else AlertStatus.REJECTED
    return replace(alert, status=status)


def needs_knowledgebase_update(alert: Alert) -> bool:
    """Confirmed anomalies are the only trigger for learning a new class."""
    return alert.kind == ANOMALY and alert.status is AlertStatus.CONFIRMED_ATTACK
