"""Sectioning a global network into linked subnets.

A sectioning assigns every variable to one or more subnets and declares
which subnet pairs may exchange beliefs.  Validation enforces the three
conditions that make distributed inference exact:

1. the link graph is a tree,
2. for any variable, the subnets holding it form a connected piece of
   that tree (so shared state flows through every intermediate subnet),
3. every shared variable's full parent set sits inside at least one of
   the two subnets on each link, and every variable has some subnet
   containing its whole family (which is where its CPT is assigned).
"""

from dataclasses import dataclass

from sentinet.bayes.network import BayesNet
from sentinet.errors import (
    NetworkFormatError,
    NotHypertreeError,
    UncoveredVariableError,
    UnknownVariableError,
    UnsoundDsepsetError,
)


@dataclass(frozen=True)
class SubnetSpec:
    id: int
    variables: tuple[int, ...]
    neighbors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(sorted(set(self.variables))))
        object.__setattr__(self, "neighbors", tuple(sorted(set(self.neighbors))))


@dataclass(frozen=True)
class Msbn:
    net: BayesNet
    subnets: tuple[SubnetSpec, ...]
    links: tuple[tuple[int, int], ...]
    dsepsets: dict[tuple[int, int], tuple[int, ...]]
    cpt_owner: dict[int, int]

    def subnet(self, sid: int) -> SubnetSpec:
        for s in self.subnets:
            if s.id == sid:
                return s
        raise KeyError(sid)


def _links_from_specs(specs) -> tuple[tuple[int, int], ...]:
    ids = {s.id for s in specs}
    links = set()
    for s in specs:
        for nb in s.neighbors:
            if nb not in ids:
                raise NotHypertreeError(f"subnet {s.id} links to unknown subnet {nb}")
            if nb == s.id:
                raise NotHypertreeError(f"subnet {s.id} links to itself")
            links.add((min(s.id, nb), max(s.id, nb)))
    for a, b in sorted(links):
        sa = next(s for s in specs if s.id == a)
        sb = next(s for s in specs if s.id == b)
        if b not in sa.neighbors or a not in sb.neighbors:
            raise NotHypertreeError(f"link {a}-{b} declared on one side only")
    return tuple(sorted(links))


def _check_tree(ids, links) -> None:
    if len(links) != len(ids) - 1:
        raise NotHypertreeError(
            f"{len(ids)} subnets need {len(ids) - 1} links to form a tree, got {len(links)}"
        )
    adj = {i: set() for i in ids}
    for a, b in links:
        adj[a].add(b)
        adj[b].add(a)
    seen = set()
    stack = [min(ids)]
    while stack:
        s = stack.pop()
        if s in seen:
            continue
        seen.add(s)
        stack.extend(adj[s] - seen)
    if seen != set(ids):
        raise NotHypertreeError("subnet link graph is disconnected")


def section_network(net: BayesNet, specs) -> Msbn:
    """Validate a sectioning and compute d-sepsets plus CPT ownership."""
    specs = tuple(sorted(specs, key=lambda s: s.id))
    ids = [s.id for s in specs]
    if len(set(ids)) != len(ids):
        raise NotHypertreeError(f"duplicate subnet ids in {ids}")

    valid_vars = {v.id for v in net.variables}
    for s in specs:
        bad = [v for v in s.variables if v not in valid_vars]
        if bad:
            raise UnknownVariableError(f"subnet {s.id} lists unknown variables {bad}")
    covered = set()
    for s in specs:
        covered.update(s.variables)
    missing = sorted(valid_vars - covered)
    if missing:
        raise UncoveredVariableError(f"variables {missing} appear in no subnet")

    links = _links_from_specs(specs)
    _check_tree(ids, links)

    # a variable's holders must form a connected subtree of the link graph
    adj = {i: set() for i in ids}
    for a, b in links:
        adj[a].add(b)
        adj[b].add(a)
    holders = {v: {s.id for s in specs if v in s.variables} for v in sorted(covered)}
    for v, hs in holders.items():
        stack = [min(hs)]
        seen = set()
        while stack:
            s = stack.pop()
            if s in seen:
                continue
            seen.add(s)
            stack.extend((adj[s] & hs) - seen)
        if seen != hs:
            raise NotHypertreeError(
                f"subnets holding variable {v} are not connected in the link graph"
            )

    by_id = {s.id: set(s.variables) for s in specs}
    dsepsets = {}
    for a, b in links:
        shared = tuple(sorted(by_id[a] & by_id[b]))
        if not shared:
            raise NotHypertreeError(f"link {a}-{b} shares no variables")
        for v in shared:
            ps = set(net.parents(v))
            if not (ps <= by_id[a] or ps <= by_id[b]):
                raise UnsoundDsepsetError(
                    v, f"parents {sorted(ps)} fit neither subnet {a} nor {b}"
                )
        dsepsets[(a, b)] = shared

    cpt_owner = {}
    for v in sorted(valid_vars):
        fam = set(net.family(v))
        eligible = [s.id for s in specs if fam <= by_id[s.id]]
        if not eligible:
            raise UnsoundDsepsetError(
                v, f"no subnet contains the whole family {sorted(fam)}"
            )
        cpt_owner[v] = min(eligible)

    return Msbn(net, specs, links, dsepsets, cpt_owner)


def serialize_sectioning(msbn: Msbn) -> str:
    names = {v.id: v.name for v in msbn.net.variables}
    lines = ["[subnets]"]
    for s in msbn.subnets:
        lines.append(f"{s.id}: " + " ".join(names[v] for v in s.variables))
    lines.append("[links]")
    for a, b in msbn.links:
        lines.append(f"{a} {b}")
    return "\n".join(lines) + "\n"


def parse_sectioning(text: str, net: BayesNet) -> Msbn:
    """Read a sectioning file (variable names, not ids) and validate it."""
    section = None
    seen = []
    subnet_vars: dict[int, list[int]] = {}
    links: list[tuple[int, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line in ("[subnets]", "[links]"):
            if line in seen:
                raise NetworkFormatError(f"line {line_no}: duplicate section {line}")
            seen.append(line)
            section = line
            continue
        if section is None:
            raise NetworkFormatError(f"line {line_no}: content before any section")
        tokens = line.split()
        if section == "[subnets]":
            if not tokens[0].endswith(":"):
                raise NetworkFormatError(
                    f"line {line_no}: subnet line must start with '<id>:'"
                )
            try:
                sid = int(tokens[0][:-1])
            except ValueError:
                raise NetworkFormatError(f"line {line_no}: bad subnet id") from None
            if sid in subnet_vars:
                raise NetworkFormatError(f"line {line_no}: subnet {sid} declared twice")
            try:
                subnet_vars[sid] = [net.var_by_name(t).id for t in tokens[1:]]
            except KeyError as exc:
                raise NetworkFormatError(
                    f"line {line_no}: unknown variable name {exc.args[0]!r}"
                ) from None
        else:
            if len(tokens) != 2:
                raise NetworkFormatError(f"line {line_no}: link line needs two subnet ids")
            try:
                a, b = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise NetworkFormatError(f"line {line_no}: link ids must be integers") from None
            links.append((min(a, b), max(a, b)))

    if seen != ["[subnets]", "[links]"]:
        raise NetworkFormatError(
            "expected sections [subnets], [links] in order, got " + (", ".join(seen) or "none")
        )
    neighbors: dict[int, set[int]] = {sid: set() for sid in subnet_vars}
    for a, b in links:
        if a not in subnet_vars or b not in subnet_vars:
            raise NetworkFormatError(f"link {a}-{b} references an undeclared subnet")
        neighbors[a].add(b)
        neighbors[b].add(a)
    specs = [
        SubnetSpec(sid, tuple(v_ids), tuple(sorted(neighbors[sid])))
        for sid, v_ids in sorted(subnet_vars.items())
    ]
    return section_network(net, specs)
