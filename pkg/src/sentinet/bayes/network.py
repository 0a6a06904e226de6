"""Discrete Bayesian network representation.

A network is a DAG over dense-id variables; each variable carries one
conditional probability table.  CPT rows are indexed by the parent state
combination in row-major order of the ``parents`` tuple (first parent is the
slowest axis), columns by the child state.
"""

import heapq
from dataclasses import dataclass, field

import numpy as np

from sentinet.errors import IncompleteAssignmentError

NORMALIZATION_TOL = 1e-9

Evidence = dict[int, int]


@dataclass(frozen=True)
class Variable:
    id: int
    name: str
    states: tuple[str, ...]

    @property
    def arity(self) -> int:
        return len(self.states)


@dataclass(frozen=True, eq=False)
class Cpt:
    child: int
    parents: tuple[int, ...]
    table: np.ndarray  # (prod parent arities, child arity)

    def __post_init__(self):
        object.__setattr__(self, "table", np.asarray(self.table, dtype=np.float64))

    def row_index(self, assignment) -> int:
        """Row for a full assignment (mapping variable id -> state index)."""
        row = 0
        for p in self.parents:
            row = row * self._parent_arity.get(p, 0) + assignment[p]
        return row

    # arity bookkeeping is injected by BayesNet; kept private
    _parent_arity: dict = field(default_factory=dict, compare=False, repr=False)


@dataclass(frozen=True, eq=False)
class Posterior:
    variable: int
    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "probs", np.asarray(self.probs, dtype=np.float64))


class BayesNet:
    """Variables plus one CPT per variable; edges are implied by the CPTs."""

    def __init__(self, variables, cpts):
        self.variables = tuple(variables)
        cpts = sorted(cpts, key=lambda c: c.child)
        arity = {v.id: v.arity for v in self.variables}
        self.cpts = tuple(
            Cpt(c.child, tuple(c.parents), c.table) for c in cpts
        )
        for c in self.cpts:
            c._parent_arity.update({p: arity.get(p, 0) for p in c.parents})

    @property
    def n(self) -> int:
        return len(self.variables)

    def arity(self, v: int) -> int:
        return self.variables[v].arity

    def arities(self) -> tuple[int, ...]:
        return tuple(v.arity for v in self.variables)

    def parents(self, v: int) -> tuple[int, ...]:
        return self.cpts[v].parents

    def family(self, v: int) -> tuple[int, ...]:
        """Child plus parents, sorted by id."""
        return tuple(sorted((v, *self.cpts[v].parents)))

    def var_by_name(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(name)

    def state_space(self) -> int:
        size = 1
        for v in self.variables:
            size *= v.arity
        return size


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations


def _acyclic(net: BayesNet) -> bool:
    # Kahn's algorithm over the child<-parent edges.
    indeg = [len(net.cpts[v].parents) for v in range(net.n)]
    children: list[list[int]] = [[] for _ in range(net.n)]
    for c in net.cpts:
        for p in c.parents:
            if 0 <= p < net.n:
                children[p].append(c.child)
    queue = sorted(v for v in range(net.n) if indeg[v] == 0)
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for ch in children[v]:
            indeg[ch] -= 1
            if indeg[ch] == 0:
                queue.append(ch)
    return seen == net.n


def validate_network(net: BayesNet) -> ValidationReport:
    """Check every structural and numeric invariant; list all violations."""
    out: list[Violation] = []
    ids = [v.id for v in net.variables]
    if ids != list(range(len(ids))):
        out.append(Violation("arity_mismatch", f"variable ids not contiguous: {ids}"))
        return ValidationReport(out)

    for v in net.variables:
        if v.arity < 2:
            out.append(Violation("arity_mismatch", f"variable {v.id} has arity {v.arity} < 2"))
        if len(set(v.states)) != len(v.states):
            out.append(Violation("arity_mismatch", f"variable {v.id} repeats a state name"))

    if len(net.cpts) != net.n or [c.child for c in net.cpts] != list(range(net.n)):
        out.append(Violation("arity_mismatch", "need exactly one cpt per variable"))
        return ValidationReport(out)

    for c in net.cpts:
        bad_parent = [p for p in c.parents if not 0 <= p < net.n or p == c.child]
        if bad_parent:
            out.append(Violation("arity_mismatch", f"cpt of {c.child} has invalid parents {bad_parent}"))
            continue
        if len(set(c.parents)) != len(c.parents):
            out.append(Violation("arity_mismatch", f"cpt of {c.child} repeats a parent"))
            continue
        rows = 1
        for p in c.parents:
            rows *= net.arity(p)
        if c.table.shape != (rows, net.arity(c.child)):
            out.append(Violation(
                "arity_mismatch",
                f"cpt of {c.child} has shape {c.table.shape}, expected {(rows, net.arity(c.child))}",
            ))
            continue
        if np.any(c.table < 0.0) or np.any(c.table > 1.0):
            out.append(Violation("arity_mismatch", f"cpt of {c.child} has entries outside [0, 1]"))
        sums = c.table.sum(axis=1)
        for r in np.nonzero(np.abs(sums - 1.0) > NORMALIZATION_TOL)[0]:
            out.append(Violation(
                "cpt_row_not_normalized",
                f"cpt of {c.child}, row {int(r)} sums to {sums[r]!r}",
            ))

    if not _acyclic(net):
        out.append(Violation("cyclic_graph", "edge relation contains a directed cycle"))
    return ValidationReport(out)


def joint_probability(net: BayesNet, assignment: Evidence) -> float:
    """Chain-rule product of CPT entries for one full assignment."""
    missing = [v.id for v in net.variables if v.id not in assignment]
    if missing:
        raise IncompleteAssignmentError(f"assignment missing variables {missing}")
    p = 1.0
    for c in net.cpts:
        p *= float(c.table[c.row_index(assignment), assignment[c.child]])
    return p


def topological_order(net: BayesNet) -> list[int]:
    """Parents before children; among ready variables, lowest id first."""
    indeg = {v.id: len(net.parents(v.id)) for v in net.variables}
    children: dict[int, list[int]] = {v.id: [] for v in net.variables}
    for c in net.cpts:
        for p in c.parents:
            children[p].append(c.child)
    ready = [v for v, d in indeg.items() if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for ch in children[v]:
            indeg[ch] -= 1
            if indeg[ch] == 0:
                heapq.heappush(ready, ch)
    return order
