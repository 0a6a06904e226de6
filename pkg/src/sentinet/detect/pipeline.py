"""Sampling, splitting, and discretization.

Everything downstream of parsing works on Example rows (raw attribute
strings plus a resolved class) until discretize turns them into a dense
integer Dataset.  Binning is learned on training rows only and the
resulting BinningSpec is reapplied verbatim to test rows, so test data
never leaks into bin boundaries.
"""

import bisect
import random
import warnings
from dataclasses import dataclass

import numpy as np

from sentinet.detect import schema
from sentinet.errors import (
    DegenerateAttributeWarning,
    EmptyDatasetError,
    NetworkFormatError,
    NotEnoughRecordsError,
    UnknownLabelError,
)

RARE_SYMBOL_MIN_COUNT = 10


@dataclass(frozen=True)
class Example:
    values: tuple[str, ...]
    cls: str


def label_records(records, table) -> list[Example]:
    return [Example(r.values, schema.map_label(r.label, table)) for r in records]


def class_histogram(examples) -> dict[str, int]:
    counts: dict[str, int] = {}
    for ex in examples:
        counts[ex.cls] = counts.get(ex.cls, 0) + 1
    return counts


def _largest_remainder(targets: dict[str, float], total: int) -> dict[str, int]:
    """Integer apportionment: floor everything, hand out the leftovers to
    the largest fractional parts (ties by class name)."""
    base = {c: int(t) for c, t in targets.items()}
    leftover = total - sum(base.values())
    order = sorted(targets, key=lambda c: (-(targets[c] - base[c]), c))
    for c in order[:leftover]:
        base[c] += 1
    return base


def stratified_sample(examples, n: int, seed: int) -> list[Example]:
    """Proportional per-class sample of exactly n rows, deterministic."""
    if n > len(examples):
        raise NotEnoughRecordsError(f"asked for {n} of {len(examples)} records")
    counts = class_histogram(examples)
    total = len(examples)
    quota = _largest_remainder({c: n * k / total for c, k in counts.items()}, n)
    rng = random.Random(seed)
    chosen: list[int] = []
    for cls in sorted(quota):
        idxs = [i for i, ex in enumerate(examples) if ex.cls == cls]
        chosen.extend(rng.sample(idxs, quota[cls]))
    return [examples[i] for i in sorted(chosen)]


def train_test_split(examples, ratio: float, seed: int):
    """Per-class shuffled split; every class with two or more rows lands
    on both sides."""
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"split ratio must be in (0,1), got {ratio}")
    rng = random.Random(seed)
    train_idx: list[int] = []
    test_idx: list[int] = []
    by_class: dict[str, list[int]] = {}
    for i, ex in enumerate(examples):
        by_class.setdefault(ex.cls, []).append(i)
    for cls in sorted(by_class):
        idxs = by_class[cls]
        rng.shuffle(idxs)
        cut = int(len(idxs) * ratio + 0.5)
        if len(idxs) >= 2:
            cut = min(max(cut, 1), len(idxs) - 1)
        train_idx.extend(idxs[:cut])
        test_idx.extend(idxs[cut:])
    return (
        [examples[i] for i in sorted(train_idx)],
        [examples[i] for i in sorted(test_idx)],
    )


@dataclass(frozen=True)
class AttributeBins:
    name: str
    kind: str  # "continuous" | "symbolic"
    boundaries: tuple[float, ...]  # continuous: strictly increasing cut points
    mapping: tuple[tuple[str, int], ...]  # symbolic: kept value -> index
    states: tuple[str, ...]

    @property
    def arity(self) -> int:
        return len(self.states)

    def encode(self, raw: str) -> int:
        if self.kind == "continuous":
            # bins are right-closed: value == cut belongs below
            return bisect.bisect_left(self.boundaries, float(raw))
        table = dict(self.mapping)
        return table.get(raw, len(table))  # unseen and rare pool into `other`


@dataclass(frozen=True)
class BinningSpec:
    attributes: tuple[AttributeBins, ...]


@dataclass
class Dataset:
    """Dense integer design matrix; variable 0 is the class column."""

    names: tuple[str, ...]
    arities: tuple[int, ...]
    state_names: tuple[tuple[str, ...], ...]
    data: np.ndarray  # (rows, variables) int32
    class_states: tuple[str, ...]

    CLASS_VAR = 0

    @property
    def n_rows(self) -> int:
        return self.data.shape[0]

    @property
    def n_vars(self) -> int:
        return self.data.shape[1]

    def feature_vars(self) -> range:
        return range(1, self.n_vars)

    def row_evidence(self, row: int) -> dict[int, int]:
        """Feature observations of one row, keyed by variable id."""
        return {v: int(self.data[row, v]) for v in self.feature_vars()}


def _token(text: str) -> str:
    """State names travel through space-separated files."""
    return text.replace(" ", "_").replace("#", "_") or "_"


def _continuous_states(cuts) -> tuple[str, ...]:
    states = []
    for i in range(len(cuts) + 1):
        lo = "-inf" if i == 0 else f"{cuts[i - 1]:g}"
        hi = "inf" if i == len(cuts) else f"{cuts[i]:g}"
        states.append(_token(f"({lo},{hi}]"))
    return tuple(states)


def _continuous_bins(name: str, raw: list[str], k: int) -> AttributeBins:
    values = np.sort(np.array([float(x) for x in raw], dtype=np.float64))
    cuts = []
    for i in range(1, k):
        # Close each bin at the last value of its chunk so k divides evenly
        # when the data does.
        q = values[max(0, (i * len(values)) // k - 1)]
        if not cuts or q > cuts[-1]:
            cuts.append(float(q))
    if values[0] == values[-1]:
        cuts = []
        warnings.warn(
            f"attribute {name} is constant; one bin", DegenerateAttributeWarning
        )
    while cuts and cuts[-1] >= values[-1]:
        cuts.pop()
    return AttributeBins(name, "continuous", tuple(cuts), (), _continuous_states(cuts))


def _symbolic_bins(name: str, raw: list[str]) -> AttributeBins:
    counts: dict[str, int] = {}
    for v in raw:
        counts[v] = counts.get(v, 0) + 1
    kept = sorted(v for v, c in counts.items() if c >= RARE_SYMBOL_MIN_COUNT)
    mapping = tuple((v, i) for i, v in enumerate(kept))
    states = tuple(_token(v) for v in kept) + ("other",)
    return AttributeBins(name, "symbolic", (), mapping, states)


def build_binning(examples, k: int, names=None, kinds=None) -> BinningSpec:
    """Learn equal-frequency bins (continuous) and value maps (symbolic)."""
    if not examples:
        raise EmptyDatasetError("no rows to bin")
    if k < 2:
        raise ValueError(f"need at least 2 bins, got {k}")
    width = len(examples[0].values)
    if names is None:
        names = schema.ATTRIBUTE_NAMES if width == schema.N_ATTRIBUTES else tuple(
            f"f{j}" for j in range(width)
        )
    if kinds is None:
        kinds = schema.ATTRIBUTE_KINDS if width == schema.N_ATTRIBUTES else (
            "symbolic",
        ) * width
    attrs = []
    for j in range(width):
        column = [ex.values[j] for ex in examples]
        if kinds[j] == "continuous":
            attrs.append(_continuous_bins(names[j], column, k))
        else:
            attrs.append(_symbolic_bins(names[j], column))
    return BinningSpec(tuple(attrs))


def apply_binning(examples, spec: BinningSpec, class_states) -> Dataset:
    """Encode rows with an existing spec; class set must cover every row."""
    if not examples:
        raise EmptyDatasetError("no rows to encode")
    class_index = {c: i for i, c in enumerate(class_states)}
    for ex in examples:
        if ex.cls not in class_index:
            raise UnknownLabelError(f"class {ex.cls!r} not in {class_states}")
    n_vars = len(spec.attributes) + 1
    data = np.zeros((len(examples), n_vars), dtype=np.int32)
    for r, ex in enumerate(examples):
        data[r, 0] = class_index[ex.cls]
        for j, attr in enumerate(spec.attributes):
            data[r, j + 1] = attr.encode(ex.values[j])
    names = ("class",) + tuple(a.name for a in spec.attributes)
    arities = (len(class_states),) + tuple(a.arity for a in spec.attributes)
    state_names = (tuple(class_states),) + tuple(a.states for a in spec.attributes)
    return Dataset(names, arities, state_names, data, tuple(class_states))


def canonical_class_order(examples) -> tuple[str, ...]:
    """Known activity classes in fixed order, then any extras sorted."""
    present = {ex.cls for ex in examples}
    ordered = [c for c in schema.BASE_CLASSES if c in present]
    ordered.extend(sorted(present - set(schema.BASE_CLASSES)))
    return tuple(ordered)


def discretize(examples, k: int = 5, names=None, kinds=None, class_states=None):
    """One-call train-side path: learn the binning, encode, return both."""
    spec = build_binning(examples, k, names=names, kinds=kinds)
    if class_states is None:
        class_states = canonical_class_order(examples)
    return apply_binning(examples, spec, class_states), spec


def serialize_binning(spec: BinningSpec) -> str:
    """One line per attribute: `name continuous <cut>...` with repr floats,
    or `name symbolic <value>...` with kept values in index order."""
    lines = []
    for a in spec.attributes:
        if a.kind == "continuous":
            parts = [repr(c) for c in a.boundaries]
        else:
            parts = [v for v, _ in a.mapping]
        lines.append(" ".join([a.name, a.kind, *parts]))
    return "\n".join(lines) + "\n"


def parse_binning(text: str) -> BinningSpec:
    attrs = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 2 or parts[1] not in ("continuous", "symbolic"):
            raise NetworkFormatError(f"line {line_no}: expected `name kind values...`")
        name, kind, rest = parts[0], parts[1], parts[2:]
        if kind == "continuous":
            cuts = tuple(float(c) for c in rest)
            if any(b <= a for a, b in zip(cuts, cuts[1:])):
                raise NetworkFormatError(f"line {line_no}: cuts not increasing")
            attrs.append(AttributeBins(name, kind, cuts, (), _continuous_states(cuts)))
        else:
            mapping = tuple((v, i) for i, v in enumerate(rest))
            states = tuple(_token(v) for v in rest) + ("other",)
            attrs.append(AttributeBins(name, kind, (), mapping, states))
    return BinningSpec(tuple(attrs))
