"""Plain-text network files.

Grammar (tokens separated by single spaces, one record per line):

    [variables]
    <id> <name> <state-name> <state-name> ...
    [edges]
    <child-id>: <parent-id> <parent-id> ...
    [cpts]
    <child-id> <row-index> <p> <p> ...

Section headers are literal. `#` starts a comment; comments and blank
lines are ignored when parsing. Every variable needs one `[variables]`
line and one `[cpts]` row per parent-state combination; `[edges]` lines
appear only for children with at least one parent, and the parent order
on that line fixes the row-major order of the CPT row indices.

A canonical file lists variables by ascending id, edge lines by ascending
child id, CPT rows by (child id, row index), uses repr() for floats, has
no comments, and ends with a newline. serialize_network always emits the
canonical form, so parse -> serialize is byte-identical for canonical
input.
"""

import numpy as np

from sentinet.bayes.network import BayesNet, Cpt, Variable
from sentinet.errors import NetworkFormatError


def serialize_network(net: BayesNet) -> str:
    lines = ["[variables]"]
    for v in net.variables:
        lines.append(f"{v.id} {v.name} " + " ".join(v.states))
    lines.append("[edges]")
    for cpt in net.cpts:
        if cpt.parents:
            lines.append(f"{cpt.child}: " + " ".join(str(p) for p in cpt.parents))
    lines.append("[cpts]")
    for cpt in net.cpts:
        for row in range(cpt.table.shape[0]):
            probs = " ".join(repr(float(p)) for p in cpt.table[row])
            lines.append(f"{cpt.child} {row} {probs}")
    return "\n".join(lines) + "\n"


def _fail(line_no: int, reason: str) -> NetworkFormatError:
    return NetworkFormatError(f"line {line_no}: {reason}")


def parse_network(text: str) -> BayesNet:
    variables: list[Variable] = []
    parents: dict[int, tuple[int, ...]] = {}
    rows: dict[int, dict[int, list[float]]] = {}
    section = None
    seen_sections = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line in ("[variables]", "[edges]", "[cpts]"):
            if line in seen_sections:
                raise _fail(line_no, f"duplicate section {line}")
            seen_sections.append(line)
            section = line
            continue
        if section is None:
            raise _fail(line_no, "content before any section header")
        tokens = line.split()
        if section == "[variables]":
            if len(tokens) < 3:
                raise _fail(line_no, "variable needs id, name, and at least one state")
            try:
                vid = int(tokens[0])
            except ValueError:
                raise _fail(line_no, f"bad variable id {tokens[0]!r}") from None
            if any(v.id == vid for v in variables):
                raise _fail(line_no, f"variable {vid} declared twice")
            variables.append(Variable(vid, tokens[1], tuple(tokens[2:])))
        elif section == "[edges]":
            if not tokens[0].endswith(":"):
                raise _fail(line_no, "edge line must start with '<child-id>:'")
            try:
                child = int(tokens[0][:-1])
                plist = tuple(int(t) for t in tokens[1:])
            except ValueError:
                raise _fail(line_no, "edge ids must be integers") from None
            if not plist:
                raise _fail(line_no, "edge line without parents")
            if child in parents:
                raise _fail(line_no, f"child {child} listed twice in [edges]")
            parents[child] = plist
        else:
            if len(tokens) < 3:
                raise _fail(line_no, "cpt row needs child id, row index, probabilities")
            try:
                child = int(tokens[0])
                row = int(tokens[1])
                probs = [float(t) for t in tokens[2:]]
            except ValueError:
                raise _fail(line_no, "cpt row fields must be numeric") from None
            row_map = rows.setdefault(child, {})
            if row in row_map:
                raise _fail(line_no, f"cpt row {row} of child {child} appears twice")
            row_map[row] = probs

    if seen_sections != ["[variables]", "[edges]", "[cpts]"]:
        raise NetworkFormatError(
            "expected sections [variables], [edges], [cpts] in order, got "
            + (", ".join(seen_sections) or "none")
        )
    if not variables:
        raise NetworkFormatError("no variables declared")

    variables.sort(key=lambda v: v.id)
    ids = {v.id for v in variables}
    arity = {v.id: v.arity for v in variables}
    for child, plist in parents.items():
        if child not in ids:
            raise NetworkFormatError(f"[edges] references unknown child {child}")
        for p in plist:
            if p not in ids:
                raise NetworkFormatError(f"[edges] references unknown parent {p}")

    cpts = []
    for v in variables:
        plist = parents.get(v.id, ())
        n_rows = 1
        for p in plist:
            n_rows *= arity[p]
        row_map = rows.get(v.id)
        if row_map is None:
            raise NetworkFormatError(f"variable {v.id} has no cpt rows")
        if sorted(row_map) != list(range(n_rows)):
            raise NetworkFormatError(
                f"variable {v.id} needs cpt rows 0..{n_rows - 1}, got "
                + ", ".join(str(r) for r in sorted(row_map))
            )
        table = np.empty((n_rows, v.arity), dtype=np.float64)
        for row, probs in row_map.items():
            if len(probs) != v.arity:
                raise NetworkFormatError(
                    f"cpt row {row} of variable {v.id} has {len(probs)} entries, "
                    f"expected {v.arity}"
                )
            table[row] = probs
        cpts.append(Cpt(v.id, plist, table))
    extra = set(rows) - ids
    if extra:
        raise NetworkFormatError(
            "[cpts] references unknown variables " + ", ".join(map(str, sorted(extra)))
        )

    return BayesNet(tuple(variables), tuple(cpts))
