from sentinet.agents.alerts import (
    ANOMALY,
    KNOWN_ATTACK,
    NO_ALERT,
    Alert,
    AlertStatus,
    DetectionPolicy,
    confirm_alert,
    decide,
    make_alert,
    needs_knowledgebase_update,
)
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

__all__ = [
    "ANOMALY",
    "Alert",
    "AlertStatus",
    "AgentDescriptor",
    "AgentKind",
    "DetectionPolicy",
    "KNOWN_ATTACK",
    "NO_ALERT",
    "Registry",
    "WireMessage",
    "confirm_alert",
    "decide",
    "encode_message",
    "format_beliefs",
    "format_linkage",
    "is_linkage_payload",
    "lookup",
    "make_alert",
    "needs_knowledgebase_update",
    "parse_beliefs",
    "parse_linkage",
    "parse_message",
    "register_agent",
]
