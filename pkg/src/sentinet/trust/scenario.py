"""Trust scenario files: declarative inputs for one DTM round.

Line-oriented key/argument records; `#` comments and blank lines are
skipped.  Hosts not named in a `behavior` line are honest; assessments
not named default to 0 (peer judged normal).

    hosts 4
    seed 7
    policy default
    literal_first_case off
    behavior 1 silent
    behavior 2 constant_lie 1
    behavior 3 split_send 0=1 1=skip 2=0
    assess 0 2 1
    expect 2 compromised
"""

from dataclasses import dataclass, field

from sentinet.errors import NetworkFormatError
from sentinet.trust.dtm import DtmOutcome, HostVerdict, TrustDomain, dtm_round
from sentinet.trust.sma import ConstantLie, DropRelay, Honest, Silent, SplitSend

_VERDICT_NAMES = {v.value.lower(): v for v in HostVerdict}


@dataclass
class Scenario:
    hosts: int
    seed: int = 0
    policy: str = "default"
    literal_first_case: bool = False
    behaviors: dict[int, object] = field(default_factory=dict)
    assessments: dict[int, dict[int, int]] = field(default_factory=dict)
    expected: dict[int, HostVerdict] = field(default_factory=dict)


def _parse_behavior(line_no: int, tokens: list[str]):
    kind = tokens[0]
    try:
        if kind == "honest":
            return Honest()
        if kind == "silent":
            return Silent()
        if kind == "constant_lie":
            return ConstantLie(int(tokens[1]))
        if kind == "drop_relay":
            seed = int(tokens[2]) if len(tokens) > 2 else 0
            return DropRelay(float(tokens[1]), seed)
        if kind == "split_send":
            values = {}
            for part in tokens[1:]:
                r, v = part.split("=", 1)
                values[int(r)] = None if v == "skip" else int(v)
            return SplitSend(values)
    except (ValueError, IndexError):
        raise NetworkFormatError(
            f"line {line_no}: malformed {kind} behavior arguments"
        ) from None
    raise NetworkFormatError(f"line {line_no}: unknown behavior {kind!r}")


def parse_scenario(text: str) -> Scenario:
    hosts = None
    sc = Scenario(hosts=0)
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        key = tokens[0]
        try:
            if key == "hosts":
                hosts = int(tokens[1])
            elif key == "seed":
                sc.seed = int(tokens[1])
            elif key == "policy":
                sc.policy = tokens[1]
            elif key == "literal_first_case":
                sc.literal_first_case = tokens[1] == "on"
            elif key == "behavior":
                sc.behaviors[int(tokens[1])] = _parse_behavior(line_no, tokens[2:])
            elif key == "assess":
                assessor, subject, value = int(tokens[1]), int(tokens[2]), int(tokens[3])
                if value not in (0, 1):
                    raise NetworkFormatError(
                        f"line {line_no}: assessment value must be 0 or 1"
                    )
                sc.assessments.setdefault(assessor, {})[subject] = value
            elif key == "expect":
                name = tokens[2].lower()
                if name not in _VERDICT_NAMES:
                    raise NetworkFormatError(
                        f"line {line_no}: unknown verdict {tokens[2]!r}"
                    )
                sc.expected[int(tokens[1])] = _VERDICT_NAMES[name]
            else:
                raise NetworkFormatError(f"line {line_no}: unknown directive {key!r}")
        except NetworkFormatError:
            raise
        except (ValueError, IndexError):
            raise NetworkFormatError(f"line {line_no}: malformed {key} line") from None
    if hosts is None or hosts < 3:
        raise NetworkFormatError("scenario needs a 'hosts' line with at least 3 hosts")
    sc.hosts = hosts
    for h in list(sc.behaviors) + list(sc.expected):
        if not 0 <= h < hosts:
            raise NetworkFormatError(f"scenario names host {h} outside 0..{hosts - 1}")
    return sc


@dataclass
class ScenarioResult:
    scenario: Scenario
    outcome: DtmOutcome
    mismatches: dict[int, tuple[HostVerdict, HostVerdict]]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def run_scenario(sc: Scenario) -> ScenarioResult:
    domain = TrustDomain(hosts=sc.hosts, policy=sc.policy)
    outcome = dtm_round(
        domain,
        sc.behaviors,
        sc.assessments,
        seed=sc.seed,
        literal_first_case=sc.literal_first_case,
    )
    mismatches = {}
    for host, want in sorted(sc.expected.items()):
        got = outcome.verdicts[host]
        if got is not want:
            mismatches[host] = (want, got)
    return ScenarioResult(sc, outcome, mismatches)
