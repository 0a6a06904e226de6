"""Linked junction forest: local inference plus belief communication.

Each subnet compiles to its own junction tree holding exactly the CPTs it
owns.  Adjacent subnets exchange beliefs through a linkage over their
shared variables.  The linkage keeps one store per direction: the last
message the receiver absorbed from that sender.  An outgoing message is
the sender's joint marginal over the shared set divided by what the
sender previously absorbed from the recipient, so nothing the recipient
already knows is echoed back; the receiver divides by its own store for
the incoming direction and multiplies the ratio in.  Absorbed beliefs
persist in the receiver's base potentials, so a subnet's answers always
condition on everything it has heard, plus its own recorded evidence.
Sends may interleave in any order, including both directions computed
from the same snapshot before either lands.

Enter each observation in exactly one subnet; entering the same finding
on a shared variable in two subnets would double-count it.
"""

from dataclasses import dataclass

import numpy as np

from sentinet import kernels
from sentinet.bayes.graphs import UGraph, triangulate
from sentinet.bayes.junction import JunctionTree, build_junction_tree, flat_map, propagate, query_posterior
from sentinet.bayes.network import Posterior
from sentinet.errors import NotAdjacentError, UnknownVariableError
from sentinet.msbn.sectioning import Msbn


@dataclass
class LinkageTree:
    link: tuple[int, int]
    variables: tuple[int, ...]
    #: last message absorbed over this linkage, keyed by (sender, receiver)
    sent: dict[tuple[int, int], np.ndarray]

    def store(self, src: int, dst: int) -> np.ndarray:
        return self.sent[(src, dst)]


@dataclass
class LinkedJunctionForest:
    msbn: Msbn
    local: dict[int, JunctionTree]
    linkages: dict[tuple[int, int], LinkageTree]
    evidence: dict[int, dict[int, int]]


def compile_ljf(msbn: Msbn) -> LinkedJunctionForest:
    """Compile every subnet, completing each shared set so the whole
    linkage fits inside one local cluster on both sides."""
    net = msbn.net
    local = {}
    for s in msbn.subnets:
        g = UGraph(vertices=s.variables)
        for v, owner in msbn.cpt_owner.items():
            if owner == s.id:
                g.complete(net.family(v))
        for nb in s.neighbors:
            link = (min(s.id, nb), max(s.id, nb))
            g.complete(msbn.dsepsets[link])
        tri = triangulate(g)
        owned = [net.cpts[v] for v in sorted(msbn.cpt_owner) if msbn.cpt_owner[v] == s.id]
        local[s.id] = build_junction_tree(tri.chordal, tri.order, net, owned)

    linkages = {}
    for link, shared in msbn.dsepsets.items():
        size = 1
        for v in shared:
            size *= net.arity(v)
        a, b = link
        stores = {
            (a, b): np.ones(size, dtype=np.float64),
            (b, a): np.ones(size, dtype=np.float64),
        }
        linkages[link] = LinkageTree(link, shared, stores)

    return LinkedJunctionForest(
        msbn, local, linkages, {s.id: {} for s in msbn.subnets}
    )


def _subnet_vars(ljf: LinkedJunctionForest, sid: int) -> tuple[int, ...]:
    return ljf.msbn.subnet(sid).variables


def enter_evidence(ljf: LinkedJunctionForest, sid: int, evidence) -> None:
    """Record local observations; they persist for later queries and sends."""
    here = set(_subnet_vars(ljf, sid))
    for v in sorted(evidence):
        if v not in here:
            raise UnknownVariableError(f"variable {v} is not in subnet {sid}")
    ljf.evidence[sid].update(evidence)


def local_inference(ljf: LinkedJunctionForest, sid: int, e_local=None) -> dict[int, Posterior]:
    """P(x | own evidence, absorbed external beliefs) for every subnet variable.

    ``e_local`` is combined for this query only; use enter_evidence to
    make observations persistent.  No messages leave the subnet.
    """
    here = set(_subnet_vars(ljf, sid))
    combined = dict(ljf.evidence[sid])
    for v in sorted(e_local or {}):
        if v not in here:
            raise UnknownVariableError(f"variable {v} is not in subnet {sid}")
        combined[v] = e_local[v]
    cal = propagate(ljf.local[sid], combined)
    return {v: query_posterior(cal, v) for v in sorted(here)}


def _hosting_cluster(jt: JunctionTree, variables) -> int:
    need = set(variables)
    for i, c in enumerate(jt.clusters):
        if need <= set(c):
            return i
    raise AssertionError(f"no cluster contains {sorted(need)}")


def _linkage_for(ljf: LinkedJunctionForest, src: int, dst: int) -> LinkageTree:
    link = (min(src, dst), max(src, dst))
    if link not in ljf.linkages:
        raise NotAdjacentError(f"subnets {src} and {dst} are not linked")
    return ljf.linkages[link]


def linkage_message(ljf: LinkedJunctionForest, src: int, dst: int) -> np.ndarray:
    """src's new information over the variables it shares with dst.

    The joint marginal is divided by whatever src last absorbed from dst,
    so the message carries only src's own contribution and nothing dst
    told it earlier.  Normalized before shipping: a well-formed linkage
    message is a probability distribution, which is exactly what
    receivers verify before absorbing anything.
    """
    linkage = _linkage_for(ljf, src, dst)
    cal = propagate(ljf.local[src], ljf.evidence[src])
    host = _hosting_cluster(cal, linkage.variables)
    belief = cal.marginal(host, linkage.variables)
    msg = kernels.safe_ratio(belief, linkage.store(dst, src))
    return msg / msg.sum()


def absorb_linkage(ljf: LinkedJunctionForest, src: int, dst: int, msg: np.ndarray) -> None:
    """Fold a marginal received from src into dst's base potentials.

    The store for this direction remembers what was last absorbed, so only
    the ratio enters; absorbing the same message twice is an exact no-op.
    """
    linkage = _linkage_for(ljf, src, dst)
    ratio = kernels.safe_ratio(msg, linkage.store(src, dst))
    receiver = ljf.local[dst]
    host_r = _hosting_cluster(receiver, linkage.variables)
    idx = flat_map(receiver.digits[host_r], linkage.variables, receiver.arity)
    kernels.scatter_multiply(receiver.potentials[host_r], ratio, idx)
    linkage.sent[(src, dst)] = np.array(msg, dtype=np.float64)


def communicate_belief(ljf: LinkedJunctionForest, src: int, dst: int) -> LinkedJunctionForest:
    """Absorb src's current belief over the shared variables into dst.

    Only dst's potentials and the linkage store change; src is read-only
    here, so repeated sends with nothing new are exact no-ops.
    """
    absorb_linkage(ljf, src, dst, linkage_message(ljf, src, dst))
    return ljf


def full_communication(ljf: LinkedJunctionForest) -> LinkedJunctionForest:
    """Inward sweep to the lowest-id subnet, then outward; afterwards every
    subnet's local answers agree with the global posterior."""
    ids = [s.id for s in ljf.msbn.subnets]
    root = min(ids)
    adj = {i: set() for i in ids}
    for a, b in ljf.msbn.links:
        adj[a].add(b)
        adj[b].add(a)
    order = [root]
    parent = {root: None}
    qi = 0
    while qi < len(order):
        s = order[qi]
        qi += 1
        for nb in sorted(adj[s]):
            if nb not in parent:
                parent[nb] = s
                order.append(nb)
    for s in reversed(order[1:]):
        communicate_belief(ljf, s, parent[s])
    for s in order[1:]:
        communicate_belief(ljf, parent[s], s)
    return ljf
