"""Ground-truth posteriors by explicit joint enumeration.

Builds the dense joint table by broadcast-multiplying every CPT, applies
evidence by zeroing incompatible slices, and normalizes.  Deliberately shares
no code with the junction-tree path so the two routes stay independent
checks of each other.
"""

import numpy as np

from sentinet.bayes.network import BayesNet, Evidence, Posterior
from sentinet.errors import (
    StateSpaceTooLargeError,
    UnknownVariableError,
    ZeroProbabilityEvidenceError,
)

DEFAULT_ENUMERATION_CAP = 1 << 22


def _check_evidence(net: BayesNet, evidence: Evidence) -> None:
    for v, s in evidence.items():
        if not 0 <= v < net.n:
            raise UnknownVariableError(f"no variable {v}")
        if not 0 <= s < net.arity(v):
            raise UnknownVariableError(f"variable {v} has no state {s}")


def dense_joint(net: BayesNet, cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    """Full joint table, one axis per variable in id order."""
    if net.state_space() > cap:
        raise StateSpaceTooLargeError(
            f"state space {net.state_space()} exceeds enumeration cap {cap}"
        )
    arities = net.arities()
    joint = np.ones(arities, dtype=np.float64)
    for c in net.cpts:
        axes = (*c.parents, c.child)
        t = c.table.reshape([net.arity(a) for a in axes])
        fam = sorted(axes)
        t = np.transpose(t, [axes.index(v) for v in fam])
        shape = [net.arity(v) if v in fam else 1 for v in range(net.n)]
        joint = joint * t.reshape(shape)
    return joint


def _masked_joint(net: BayesNet, evidence: Evidence, cap: int) -> np.ndarray:
    _check_evidence(net, evidence)
    joint = dense_joint(net, cap)
    for v in sorted(evidence):
        mask = np.zeros(net.arity(v))
        mask[evidence[v]] = 1.0
        shape = [net.arity(v) if u == v else 1 for u in range(net.n)]
        joint = joint * mask.reshape(shape)
    return joint


def brute_force_posterior(
    net: BayesNet,
    target: int,
    evidence: Evidence | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Posterior:
    """Exact P(target | evidence); a delta if the target itself is observed."""
    if not 0 <= target < net.n:
        raise UnknownVariableError(f"no variable {target}")
    joint = _masked_joint(net, evidence or {}, cap)
    marginal = joint.sum(axis=tuple(a for a in range(net.n) if a != target))
    total = marginal.sum()
    if total == 0.0:
        raise ZeroProbabilityEvidenceError("evidence has probability zero")
    return Posterior(target, marginal / total)


def all_posteriors(
    net: BayesNet,
    evidence: Evidence | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> dict[int, Posterior]:
    """P(v | evidence) for every variable off one joint enumeration."""
    joint = _masked_joint(net, evidence or {}, cap)
    total = joint.sum()
    if total == 0.0:
        raise ZeroProbabilityEvidenceError("evidence has probability zero")
    out = {}
    for v in range(net.n):
        marginal = joint.sum(axis=tuple(a for a in range(net.n) if a != v))
        out[v] = Posterior(v, marginal / total)
    return out
