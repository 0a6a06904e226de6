"""Agent descriptors and the variable registry.

The registry answers one question: which agents monitor variable v, and
where do they live.  Registry agents keep no beliefs of their own, and
only intrusion-monitoring agents carry inference state; the descriptor
kind records which contract an agent follows.
"""

import enum
from dataclasses import dataclass, field

from sentinet.errors import DuplicateAgentIdError

ID_CHARS = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.-")


class AgentKind(enum.Enum):
    SYSTEM_MONITORING = "system_monitoring"
    INTRUSION_MONITORING = "intrusion_monitoring"
    REGISTRY = "registry"


@dataclass(frozen=True)
class AgentDescriptor:
    agent_id: str
    host: int
    subdomain: int
    kind: AgentKind
    variables: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.agent_id or not set(self.agent_id) <= ID_CHARS:
            raise ValueError(f"agent id {self.agent_id!r} has unusable characters")
        object.__setattr__(self, "variables", tuple(sorted(set(self.variables))))


@dataclass
class Registry:
    entries: dict[int, list[tuple[str, int]]] = field(default_factory=dict)
    descriptors: dict[str, AgentDescriptor] = field(default_factory=dict)


def register_agent(registry: Registry, desc: AgentDescriptor) -> None:
    if desc.agent_id in registry.descriptors:
        raise DuplicateAgentIdError(f"agent {desc.agent_id!r} already registered")
    registry.descriptors[desc.agent_id] = desc
    for v in desc.variables:
        registry.entries.setdefault(v, []).append((desc.agent_id, desc.host))


def lookup(registry: Registry, variable: int) -> list[tuple[str, int]]:
    """(agent id, host) pairs monitoring the variable; empty if nobody does."""
    return sorted(registry.entries.get(variable, ()))
