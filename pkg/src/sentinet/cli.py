"""Operator command line: one binary, eight subcommands.

    train          learn a model from a connection dataset, write a bundle
    evaluate       score the held-out split, print the metrics report
    section        recompute or validate the bundle's subnet sectioning
    infer          query posteriors from the bundled network
    trust-sim      run a scripted trust round, write a replayable trace
    detect-run     replay the held-out records through simulated agents
    review-alerts  apply confirm/reject decisions, grow the knowledgebase
    replay         re-run a trust scenario and compare against a saved trace

Configuration is a plain-text file of `key = value` lines (`#` starts a
comment).  Keys: dataset, labels, seed, sample, bins, tau, split,
subnets, local_period, inter_period, scenario, sectioning.  Relative
paths are resolved against the config file's directory, and every
referenced path must exist at load time.  `seed` is mandatory; no run
ever falls back to wall-clock randomness.  `--seed` and `--dataset`
override the file before validation.

A bundle is a directory written by `train`:

    network.txt     the fitted network
    bins.txt        discretization cut points and symbol tables
    sectioning.txt  subnet membership and links
    classes.txt     class states, one per line, index order
    train.txt       encoded training matrix, one row of ints per record
    manifest.txt    config hash, row/class counts, per-file digests

The manifest hash covers everything that determines the learned model:
dataset bytes, label-map bytes, seed, sample size, bin count, and split
ratio.  Consumers recompute it from their own inputs and refuse a bundle
trained under a different configuration; per-file digests catch edits to
the bundle itself.  Threshold, publish cadence, and sectioning are
runtime knobs: changing them does not invalidate a bundle.

Exit codes: 0 success; 1 a completed run violated a declared
expectation (scenario `expect` lines, replay comparison); 2 usage or
input errors.  Re-running any subcommand with the same config and seed
writes byte-identical artifacts.
"""

import argparse
import hashlib
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

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
from sentinet.agents.knowledge import update_knowledgebase
from sentinet.agents.runtime import AgentRuntime, IntrusionMonitoringAgent, SystemMonitoringAgent
from sentinet.bayes.graphs import moralize, triangulate
from sentinet.bayes.io import parse_network, serialize_network
from sentinet.bayes.junction import build_junction_tree, propagate, query_posterior
from sentinet.detect.model import Classifier, TrainedModel
from sentinet.detect.model import evaluate as score_test_split
from sentinet.detect.model import render_prediction_log, render_records, render_table
from sentinet.detect.pipeline import (
    Dataset,
    apply_binning,
    build_binning,
    canonical_class_order,
    label_records,
    parse_binning,
    serialize_binning,
    stratified_sample,
    train_test_split,
)
from sentinet.detect.schema import load_label_map, parse_kdd
from sentinet.detect.structure import fit_cpts, learn_structure
from sentinet.errors import (
    BundleMismatchError,
    DegenerateAttributeWarning,
    NetworkFormatError,
    SentinetError,
    UnknownAlertIdError,
    UnknownStateError,
    UnknownVariableError,
)
from sentinet.msbn import auto_section, compile_ljf, parse_sectioning, serialize_sectioning
from sentinet.simnet import SimConfig, Simulator
from sentinet.trust.scenario import parse_scenario, run_scenario

CLASS_VAR = Dataset.CLASS_VAR


# -- configuration ------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    dataset: Path
    labels: Path
    seed: int
    sample: int = 15000
    bins: int = 5
    tau: float = 0.5
    split: float = 0.7
    subnets: int = 3
    local_period: int = 1
    inter_period: int = 10
    scenario: Path | None = None
    sectioning: Path | None = None

    def policy(self) -> DetectionPolicy:
        return DetectionPolicy(self.tau, self.local_period, self.inter_period)


_CONFIG_INTS = ("seed", "sample", "bins", "subnets", "local_period", "inter_period")
_CONFIG_FLOATS = ("tau", "split")
_CONFIG_PATHS = ("dataset", "labels", "scenario", "sectioning")


def load_config(path: Path, seed: int | None = None, dataset: str | None = None) -> ExperimentConfig:
    """Parse and validate a config file, with flag overrides applied first."""
    raw: dict[str, str] = {}
    for line_no, line in enumerate(path.read_text().splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise NetworkFormatError(f"{path}: line {line_no}: expected `key = value`")
        key, _, value = text.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_INTS + _CONFIG_FLOATS + _CONFIG_PATHS:
            raise NetworkFormatError(f"{path}: line {line_no}: unknown key {key!r}")
        if key in raw:
            raise NetworkFormatError(f"{path}: line {line_no}: key {key!r} set twice")
        if not value:
            raise NetworkFormatError(f"{path}: line {line_no}: key {key!r} has no value")
        raw[key] = value

    if dataset is not None:
        raw["dataset"] = dataset
    if seed is not None:
        raw["seed"] = str(seed)
    for required in ("dataset", "labels"):
        if required not in raw:
            raise NetworkFormatError(f"{path}: config must set {required!r}")
    if "seed" not in raw:
        raise NetworkFormatError(
            f"{path}: config must set 'seed'; runs never default to wall-clock time"
        )

    fields: dict[str, object] = {}
    for key, value in raw.items():
        try:
            if key in _CONFIG_INTS:
                fields[key] = int(value)
            elif key in _CONFIG_FLOATS:
                fields[key] = float(value)
        except ValueError:
            raise NetworkFormatError(f"{path}: key {key!r} needs a number, got {value!r}") from None
    # Overridden dataset paths are relative to the caller's directory,
    # paths from the file are relative to the file.
    for key in _CONFIG_PATHS:
        if key not in raw:
            continue
        base = Path.cwd() if key == "dataset" and dataset is not None else path.parent
        resolved = (base / raw[key]).resolve()
        if not resolved.is_file():
            raise NetworkFormatError(f"{path}: {key} file not found: {resolved}")
        fields[key] = resolved

    cfg = ExperimentConfig(**fields)
    if cfg.sample < 1:
        raise NetworkFormatError(f"{path}: sample must be positive, got {cfg.sample}")
    if cfg.bins < 2:
        raise NetworkFormatError(f"{path}: need at least 2 bins, got {cfg.bins}")
    if not 0.0 < cfg.split < 1.0:
        raise NetworkFormatError(f"{path}: split must be in (0,1), got {cfg.split}")
    if cfg.subnets < 1:
        raise NetworkFormatError(f"{path}: subnets must be positive, got {cfg.subnets}")
    try:
        cfg.policy()
    except ValueError as err:
        raise NetworkFormatError(f"{path}: {err}") from None
    return cfg


def config_hash(cfg: ExperimentConfig) -> str:
    """Digest of the model-determining inputs (see module docstring)."""
    parts = [
        f"bins={cfg.bins}",
        f"dataset={hashlib.sha256(cfg.dataset.read_bytes()).hexdigest()}",
        f"labels={hashlib.sha256(cfg.labels.read_bytes()).hexdigest()}",
        f"sample={cfg.sample}",
        f"seed={cfg.seed}",
        f"split={cfg.split!r}",
    ]
    return hashlib.sha256("\n".join(parts).encode("ascii")).hexdigest()


def derive_splits(cfg: ExperimentConfig):
    """(train examples, test examples, class order) for a config.

    The class list comes from the whole sample so that a class present
    only in the held-out split still owns a state (its rows fall back to
    the smoothing prior); binning and structure see training rows only.
    """
    records = parse_kdd(cfg.dataset)
    table = load_label_map(cfg.labels)
    examples = label_records(records, table)
    sample = stratified_sample(examples, cfg.sample, cfg.seed)
    train_ex, test_ex = train_test_split(sample, cfg.split, cfg.seed)
    return train_ex, test_ex, canonical_class_order(sample)


# -- bundle layout ------------------------------------------------------------

@dataclass
class Bundle:
    root: Path
    net: object
    binning: object
    classes: tuple[str, ...]
    train: Dataset
    msbn: object
    manifest: list[tuple[str, str]]


def _manifest_text(manifest: list[tuple[str, str]]) -> str:
    return "\n".join(f"{k} {v}" for k, v in manifest) + "\n"


def _parse_manifest(text: str) -> list[tuple[str, str]]:
    pairs = []
    for line in text.splitlines():
        if line.strip():
            key, _, value = line.partition(" ")
            pairs.append((key, value))
    return pairs


def _matrix_text(data: np.ndarray) -> str:
    return "\n".join(" ".join(str(int(x)) for x in row) for row in data) + "\n"


_MODEL_FILES = ("network.txt", "bins.txt", "sectioning.txt", "classes.txt", "train.txt")


def _digest_pairs(root: Path) -> list[tuple[str, str]]:
    return [
        ("digest", f"{name} {hashlib.sha256((root / name).read_bytes()).hexdigest()}")
        for name in _MODEL_FILES
    ]


def _dataset_from_parts(binning, classes, data: np.ndarray) -> Dataset:
    names = ("class",) + tuple(a.name for a in binning.attributes)
    arities = (len(classes),) + tuple(a.arity for a in binning.attributes)
    state_names = (tuple(classes),) + tuple(a.states for a in binning.attributes)
    return Dataset(names, arities, state_names, data, tuple(classes))


def write_bundle(root: Path, cfg: ExperimentConfig, net, binning, classes,
                 train_ds: Dataset, msbn, test_rows: int) -> None:
    root.mkdir(parents=True, exist_ok=True)
    (root / "network.txt").write_text(serialize_network(net))
    (root / "bins.txt").write_text(serialize_binning(binning))
    (root / "sectioning.txt").write_text(serialize_sectioning(msbn))
    (root / "classes.txt").write_text("\n".join(classes) + "\n")
    (root / "train.txt").write_text(_matrix_text(train_ds.data))
    manifest = [
        ("config_hash", config_hash(cfg)),
        ("seed", str(cfg.seed)),
        ("sample", str(cfg.sample)),
        ("split", repr(cfg.split)),
        ("bins", str(cfg.bins)),
        ("classes", str(len(classes))),
        ("train_rows", str(train_ds.n_rows)),
        ("test_rows", str(test_rows)),
        ("subnets", str(len(msbn.subnets))),
    ]
    (root / "manifest.txt").write_text(_manifest_text(manifest + _digest_pairs(root)))


def load_bundle(root: Path, cfg: ExperimentConfig) -> Bundle:
    manifest = _parse_manifest((root / "manifest.txt").read_text())
    stored = dict(manifest).get("config_hash", "")
    fresh = config_hash(cfg)
    if stored != fresh:
        raise BundleMismatchError(
            f"bundle at {root} was trained under a different configuration "
            f"(manifest hash {stored[:12]}.., config hash {fresh[:12]}..)"
        )
    recorded = {k: v for k, v in (pair[1].split(" ", 1) for pair in manifest if pair[0] == "digest")}
    for name, digest in _digest_pairs(root):
        fname, value = digest.split(" ", 1)
        if recorded.get(fname) != value:
            raise BundleMismatchError(
                f"bundle file {fname} does not match its manifest digest"
            )
    net = parse_network((root / "network.txt").read_text())
    binning = parse_binning((root / "bins.txt").read_text())
    classes = tuple((root / "classes.txt").read_text().split())
    rows = [
        [int(tok) for tok in line.split()]
        for line in (root / "train.txt").read_text().splitlines()
        if line.strip()
    ]
    data = np.array(rows, dtype=np.int32)
    train_ds = _dataset_from_parts(binning, classes, data)
    msbn = parse_sectioning((root / "sectioning.txt").read_text(), net)
    return Bundle(root, net, binning, classes, train_ds, msbn, manifest)


# -- alert log ----------------------------------------------------------------

def render_alert_log(entries: list[tuple[int, Alert]]) -> str:
    """One line per alert; floats use repr so the log parses back exactly."""
    lines = []
    for record, alert in entries:
        posterior = ",".join(f"{c}={p!r}" for c, p in alert.posterior)
        lines.append(
            f"alert {alert.alert_id} record={record} agent={alert.agent_id} "
            f"tick={alert.timestamp} kind={alert.kind} "
            f"class={alert.attack_class or '-'} status={alert.status.value} "
            f"posterior={posterior}"
        )
    return "\n".join(lines) + "\n" if lines else ""


def parse_alert_log(text: str) -> list[tuple[int, Alert]]:
    entries = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        tokens = line.split()
        if len(tokens) != 9 or tokens[0] != "alert":
            raise NetworkFormatError(f"alert log line {line_no}: malformed record")
        try:
            alert_id = int(tokens[1])
            fields = dict(tok.split("=", 1) for tok in tokens[2:])
            posterior = tuple(
                (pair.split("=", 1)[0], float(pair.split("=", 1)[1]))
                for pair in fields["posterior"].split(",")
            )
            alert = Alert(
                alert_id,
                fields["kind"],
                None if fields["class"] == "-" else fields["class"],
                posterior,
                fields["agent"],
                int(fields["tick"]),
                AlertStatus(fields["status"]),
            )
            entries.append((int(fields["record"]), alert))
        except (KeyError, ValueError) as err:
            raise NetworkFormatError(f"alert log line {line_no}: {err}") from None
    return entries


# -- subcommands --------------------------------------------------------------

def cmd_train(args) -> int:
    cfg = load_config(Path(args.config), args.seed, args.dataset)
    train_ex, test_ex, classes = derive_splits(cfg)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateAttributeWarning)
        binning = build_binning(train_ex, cfg.bins)
    constant = sum(1 for w in caught if issubclass(w.category, DegenerateAttributeWarning))
    train_ds = apply_binning(train_ex, binning, classes)
    net = fit_cpts(learn_structure(train_ds), train_ds)
    if cfg.sectioning is not None:
        msbn = parse_sectioning(cfg.sectioning.read_text(), net)
    else:
        msbn = auto_section(net, cfg.subnets, cfg.seed)
    root = Path(args.bundle)
    write_bundle(root, cfg, net, binning, classes, train_ds, msbn, len(test_ex))

    print(f"trained bundle at {args.bundle}")
    print(f"records: {len(train_ex)} train, {len(test_ex)} test")
    print(f"classes: {' '.join(classes)}")
    edges = sum(len(cpt.parents) for cpt in net.cpts)
    print(f"network: {net.n} variables, {edges} edges")
    if constant:
        print(f"constant attributes: {constant} (one bin each)")
    print(f"sectioning: {len(msbn.subnets)} subnets")
    print(f"config hash: {config_hash(cfg)[:12]}")
    return 0


def cmd_evaluate(args) -> int:
    cfg = load_config(Path(args.config), args.seed, args.dataset)
    bundle = load_bundle(Path(args.bundle), cfg)
    _, test_ex, _ = derive_splits(cfg)
    test_ds = apply_binning(test_ex, bundle.binning, bundle.classes)
    clf = Classifier(bundle.net, bundle.classes)
    report, log = score_test_split(clf, test_ds, cfg.policy())
    text = render_table(report) if args.format == "table" else render_records(report)
    (bundle.root / "report.txt").write_text(text)
    (bundle.root / "predictions.txt").write_text(render_prediction_log(log))
    print(text, end="")
    return 0


def cmd_section(args) -> int:
    cfg = load_config(Path(args.config), args.seed, args.dataset)
    bundle = load_bundle(Path(args.bundle), cfg)
    if cfg.sectioning is not None:
        msbn = parse_sectioning(cfg.sectioning.read_text(), bundle.net)
    else:
        msbn = auto_section(bundle.net, cfg.subnets, cfg.seed)
    (bundle.root / "sectioning.txt").write_text(serialize_sectioning(msbn))
    manifest = [
        (k, str(len(msbn.subnets)) if k == "subnets" else v)
        for k, v in bundle.manifest
        if k != "digest"
    ]
    (bundle.root / "manifest.txt").write_text(
        _manifest_text(manifest + _digest_pairs(bundle.root))
    )

    names = {v.id: v.name for v in bundle.net.variables}
    sizes = " ".join(str(len(s.variables)) for s in msbn.subnets)
    print(f"subnets: {len(msbn.subnets)} (sizes {sizes})")
    for a, b in msbn.links:
        shared = " ".join(names[v] for v in msbn.dsepsets[(a, b)])
        print(f"link {a}-{b}: {shared}")
    return 0


def _resolve_state(var, text: str) -> int:
    if text in var.states:
        return var.states.index(text)
    try:
        index = int(text)
    except ValueError:
        index = -1
    if 0 <= index < var.arity:
        return index
    shown = " ".join(var.states[:8]) + (" ..." if var.arity > 8 else "")
    raise UnknownStateError(f"variable {var.name} has no state {text!r} (states: {shown})")


def cmd_infer(args) -> int:
    cfg = load_config(Path(args.config), args.seed, args.dataset)
    bundle = load_bundle(Path(args.bundle), cfg)
    net = bundle.net
    evidence: dict[int, int] = {}
    queries = []
    for term in args.terms:
        name, sep, state = term.partition("=")
        try:
            var = net.var_by_name(name)
        except KeyError:
            raise UnknownVariableError(f"no variable named {name!r}") from None
        if sep:
            evidence[var.id] = _resolve_state(var, state)
        else:
            queries.append(var)
    if not queries:
        queries = [net.variables[CLASS_VAR]]

    tri = triangulate(moralize(net))
    cal = propagate(build_junction_tree(tri.chordal, tri.order, net), evidence)
    for var in queries:
        probs = query_posterior(cal, var.id).probs
        if args.format == "table":
            print(f"{var.name}")
            width = max(len(s) for s in var.states)
            for state, p in zip(var.states, probs):
                print(f"  {state.ljust(width)}  {float(p):.6f}")
        else:
            for state, p in zip(var.states, probs):
                print(f"{var.name} {state} {float(p)!r}")
    return 0


def _scenario_path(args) -> Path:
    if args.scenario is not None:
        path = Path(args.scenario)
        if not path.is_file():
            raise NetworkFormatError(f"scenario file not found: {path}")
        return path
    if args.config is not None:
        cfg = load_config(Path(args.config))
        if cfg.scenario is not None:
            return cfg.scenario
    raise NetworkFormatError("no scenario: pass --scenario or set one in the config")


def cmd_trust_sim(args) -> int:
    path = _scenario_path(args)
    result = run_scenario(parse_scenario(path.read_text()))
    outcome = result.outcome

    print(f"scenario: {args.scenario or path}")
    for host in sorted(outcome.verdicts):
        print(f"host {host}: {outcome.verdicts[host].value}")
    isolated = " ".join(str(h) for h in sorted(outcome.isolation)) or "-"
    print(f"isolated: {isolated}")

    trace_text = outcome.trace.to_text()
    out = Path(args.out) if args.out else Path(f"{path.stem}.trace")
    out.write_text(trace_text)
    print(f"trace: {out} ({len(trace_text.splitlines())} lines)")

    for host, (want, got) in sorted(result.mismatches.items()):
        print(f"expectation failed: host {host} expected {want.value}, got {got.value}")
    return 0 if result.ok else 1


def cmd_replay(args) -> int:
    path = _scenario_path(args)
    recorded = Path(args.trace).read_text()
    result = run_scenario(parse_scenario(path.read_text()))
    fresh = result.outcome.trace.to_text()
    if fresh == recorded:
        print(f"replay ok: {len(fresh.splitlines())} trace lines match")
        for host in sorted(result.outcome.verdicts):
            print(f"host {host}: {result.outcome.verdicts[host].value}")
        return 0
    old_lines, new_lines = recorded.splitlines(), fresh.splitlines()
    for i, (old, new) in enumerate(zip(old_lines, new_lines), start=1):
        if old != new:
            print(f"replay mismatch: first difference at line {i}")
            print(f"  recorded: {old}")
            print(f"  fresh:    {new}")
            return 1
    print(
        f"replay mismatch: recorded {len(old_lines)} lines, fresh run {len(new_lines)}"
    )
    return 1


def _replay_stream(msbn, classes, policy: DetectionPolicy, test: Dataset, seed: int):
    """Yield (posterior, decision) per test row, one simulated run each.

    Every record is an independent connection event: a fresh forest and
    simulator over the same sectioned network.  Observations enter
    through per-subdomain monitoring feeds, cross subdomain boundaries
    as linkage messages on the configured cadence, and once the
    exchange has covered the subnet tree the subdomain holding the
    class variable answers.
    """
    hosts = len(msbn.subnets)
    owner = {}
    for s in msbn.subnets:
        for v in s.variables:
            owner[v] = min(owner.get(v, s.id), s.id)
    arities = {v: msbn.net.arity(v) for v in range(msbn.net.n)}
    answerer = min(s.id for s in msbn.subnets if CLASS_VAR in s.variables)
    until = policy.inter_period * (hosts + 1) + 2

    for r in range(test.n_rows):
        evidence = test.row_evidence(r)
        sim = Simulator(SimConfig(hosts=hosts, seed=seed, tick_limit=until + 8))
        rt = AgentRuntime(sim, policy)
        ljf = compile_ljf(msbn)
        for s in msbn.subnets:
            rt.add(IntrusionMonitoringAgent(f"ids-{s.id}", s.id, ljf, s.id))
        for s in msbn.subnets:
            owned = {v: evidence[v] for v in s.variables if owner.get(v) == s.id and v in evidence}
            if not owned:
                continue
            rt.add(
                SystemMonitoringAgent(
                    f"sys-{s.id}", s.id, s.id, tuple(sorted(owned)), arities, {1: owned}
                )
            )
            rt.subscribe(f"ids-{s.id}", f"sys-{s.id}", owned)
        sim.run(until)
        posteriors, _ = rt.agent(f"ids-{answerer}").deliberate()
        probs = posteriors[CLASS_VAR].probs
        posterior = {c: float(p) for c, p in zip(classes, probs)}
        yield posterior, decide(posterior, policy)


def cmd_detect_run(args) -> int:
    cfg = load_config(Path(args.config), args.seed, args.dataset)
    bundle = load_bundle(Path(args.bundle), cfg)
    _, test_ex, _ = derive_splits(cfg)
    test_ds = apply_binning(test_ex, bundle.binning, bundle.classes)
    answerer = min(s.id for s in bundle.msbn.subnets if CLASS_VAR in s.variables)

    stream_lines = []
    entries: list[tuple[int, Alert]] = []
    counts = {KNOWN_ATTACK: 0, ANOMALY: 0, NO_ALERT: 0}
    replay = _replay_stream(bundle.msbn, bundle.classes, cfg.policy(), test_ds, cfg.seed)
    for r, (posterior, decision) in enumerate(replay):
        outcome, cls = decision
        counts[outcome] += 1
        if outcome == KNOWN_ATTACK:
            predicted = cls
        elif outcome == NO_ALERT:
            predicted = "normal"
        else:
            predicted = "-"
        true_cls = bundle.classes[int(test_ds.data[r, CLASS_VAR])]
        stream_lines.append(f"{r} {true_cls} {predicted} {outcome}")
        if outcome != NO_ALERT:
            alert = make_alert(len(entries) + 1, decision, posterior, f"ids-{answerer}", r)
            entries.append((r, alert))

    (bundle.root / "stream.txt").write_text("\n".join(stream_lines) + "\n")
    (bundle.root / "alerts.txt").write_text(render_alert_log(entries))
    print(
        f"replayed {test_ds.n_rows} test records through "
        f"{len(bundle.msbn.subnets)} subdomain agents"
    )
    print(
        f"known attacks: {counts[KNOWN_ATTACK]}  anomalies: {counts[ANOMALY]}  "
        f"clear: {counts[NO_ALERT]}"
    )
    print(f"alerts written: {len(entries)}")
    return 0


def _parse_decisions(path: Path):
    """Ordered (verdict, alert id) steps plus the optional new-class name."""
    steps: list[tuple[str, int]] = []
    name = None
    for line_no, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] in ("confirm", "reject"):
            if len(tokens) != 2:
                raise NetworkFormatError(f"{path}: line {line_no}: {tokens[0]} needs one alert id")
            try:
                steps.append((tokens[0], int(tokens[1])))
            except ValueError:
                raise NetworkFormatError(f"{path}: line {line_no}: alert id must be an integer") from None
        elif tokens[0] == "name":
            if len(tokens) != 2:
                raise NetworkFormatError(f"{path}: line {line_no}: name needs one class token")
            name = tokens[1]
        else:
            raise NetworkFormatError(f"{path}: line {line_no}: unknown directive {tokens[0]!r}")
    return steps, name


def cmd_review_alerts(args) -> int:
    cfg = load_config(Path(args.config), args.seed, args.dataset)
    bundle = load_bundle(Path(args.bundle), cfg)
    entries = parse_alert_log((bundle.root / "alerts.txt").read_text())
    steps, new_class = _parse_decisions(Path(args.decisions))

    index = {alert.alert_id: i for i, (_, alert) in enumerate(entries)}
    confirmed = rejected = 0
    for verdict, alert_id in steps:
        if alert_id not in index:
            raise UnknownAlertIdError(f"no alert {alert_id} in the log")
        record, alert = entries[index[alert_id]]
        entries[index[alert_id]] = (record, confirm_alert(alert, verdict))
        confirmed += verdict == "confirm"
        rejected += verdict == "reject"

    (bundle.root / "alerts.txt").write_text(render_alert_log(entries))
    print(f"applied {len(steps)} decisions: {confirmed} confirmed, {rejected} rejected")

    updates = [(record, alert) for record, alert in entries if needs_knowledgebase_update(alert)]
    if not updates:
        print("no knowledgebase update needed")
        return 0

    new_class = new_class or "novel"
    if new_class in bundle.classes:
        raise NetworkFormatError(f"class {new_class!r} already known; pick another name")
    _, test_ex, _ = derive_splits(cfg)
    confirmed_rows = [test_ex[record] for record, _ in updates]
    model = TrainedModel(bundle.net, bundle.binning, bundle.classes, bundle.train)
    retrained, sectioned = update_knowledgebase(
        model, new_class, confirmed_rows, sectioning=bundle.msbn.subnets
    )

    (bundle.root / "network.txt").write_text(serialize_network(retrained.net))
    (bundle.root / "classes.txt").write_text("\n".join(retrained.class_states) + "\n")
    (bundle.root / "train.txt").write_text(_matrix_text(retrained.train.data))
    (bundle.root / "sectioning.txt").write_text(serialize_sectioning(sectioned))
    manifest = [
        (k, str(len(retrained.class_states)) if k == "classes" else v)
        for k, v in bundle.manifest
        if k != "digest"
    ]
    manifest.append(("updated", f"{new_class} {len(confirmed_rows)}"))
    (bundle.root / "manifest.txt").write_text(
        _manifest_text(manifest + _digest_pairs(bundle.root))
    )
    print(
        f"knowledgebase update: new class {new_class} "
        f"({len(confirmed_rows)} confirmed records); bundle rewritten"
    )
    return 0


# -- entry point --------------------------------------------------------------

def _add_common(sub, *, bundle=False, fmt=False):
    sub.add_argument("--config", required=True, help="experiment config file")
    sub.add_argument("--seed", type=int, help="override the config seed")
    sub.add_argument("--dataset", help="override the config dataset path")
    if bundle:
        sub.add_argument("--bundle", required=True, help="model bundle directory")
    if fmt:
        sub.add_argument(
            "--format", choices=("table", "records"), default="table",
            help="report style: aligned table or line-delimited records",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sentinet",
        description="Distributed intrusion detection: train, section, simulate, review.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="learn a model and write the bundle")
    _add_common(p, bundle=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="score the held-out split")
    _add_common(p, bundle=True, fmt=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("section", help="recompute or validate the sectioning")
    _add_common(p, bundle=True)
    p.set_defaults(func=cmd_section)

    p = sub.add_parser("infer", help="query posteriors from the bundled network")
    _add_common(p, bundle=True, fmt=True)
    p.add_argument(
        "terms", nargs="*",
        help="evidence as name=state, bare names as query variables",
    )
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("trust-sim", help="run a scripted trust round")
    p.add_argument("--config", help="config file naming a scenario")
    p.add_argument("--scenario", help="scenario file to run")
    p.add_argument("out", nargs="?", help="trace output path (default <scenario>.trace)")
    p.set_defaults(func=cmd_trust_sim)

    p = sub.add_parser("detect-run", help="replay held-out records through agents")
    _add_common(p, bundle=True)
    p.set_defaults(func=cmd_detect_run)

    p = sub.add_parser("review-alerts", help="apply confirm/reject decisions")
    _add_common(p, bundle=True)
    p.add_argument("--decisions", required=True, help="ordered confirm/reject file")
    p.set_defaults(func=cmd_review_alerts)

    p = sub.add_parser("replay", help="compare a saved trust trace to a fresh run")
    p.add_argument("--config", help="config file naming a scenario")
    p.add_argument("--scenario", help="scenario file to re-run")
    p.add_argument("trace", help="previously recorded trace file")
    p.set_defaults(func=cmd_replay)

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else 2
    try:
        return args.func(args)
    except (SentinetError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
