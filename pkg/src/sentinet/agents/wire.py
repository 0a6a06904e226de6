"""Line-delimited wire format for agent traffic.

One message per line, five space-separated fields, the payload taking
the rest of the line:

    <type> <sender> <recipient> <timestamp> <payload>

type is one of REGISTER, LOOKUP, QUERY, SUBSCRIBE, BELIEF, ALERT, TRUST.
Sender and recipient are agent ids (letters, digits, `_.-`).  The
payload grammar depends on the type:

    REGISTER   host=<int> subdomain=<int> kind=<kind> vars=<id,id,...>
    LOOKUP     var=<int>
    QUERY      var=<int>
    SUBSCRIBE  vars=<id,id,...>
    BELIEF     seq=<int> <id>:<p>,<p>,...[ <id>:<p>,...]
    BELIEF     seq=<int> link=<src-subnet>-<dst-subnet> joint=<p>,<p>,...
    ALERT      kind=<known_attack|anomaly> class=<name|->
    TRUST      subject=<int> status=<0|1>

BELIEF has two payload shapes: the per-variable form carries posterior
vectors for individual variables, the link form carries one joint
distribution over the variables two adjacent subnets share.  Belief
probabilities are repr() floats so an encode/parse round trip is exact.
Payloads must not contain newlines; everything else is left to the
per-type grammars.
"""

from dataclasses import dataclass

import numpy as np

from sentinet.errors import NetworkFormatError

MESSAGE_TYPES = ("REGISTER", "LOOKUP", "QUERY", "SUBSCRIBE", "BELIEF", "ALERT", "TRUST")


@dataclass(frozen=True)
class WireMessage:
    kind: str
    sender: str
    recipient: str
    timestamp: int
    payload: str

    def __post_init__(self):
        if self.kind not in MESSAGE_TYPES:
            raise ValueError(f"unknown message type {self.kind!r}")
        if "\n" in self.payload:
            raise ValueError("payload must be a single line")


def encode_message(msg: WireMessage) -> str:
    return f"{msg.kind} {msg.sender} {msg.recipient} {msg.timestamp} {msg.payload}"


def parse_message(line: str) -> WireMessage:
    parts = line.rstrip("\n").split(" ", 4)
    if len(parts) < 4:
        raise NetworkFormatError(f"short wire message: {line!r}")
    kind, sender, recipient, stamp = parts[:4]
    if kind not in MESSAGE_TYPES:
        raise NetworkFormatError(f"unknown message type {kind!r}")
    try:
        timestamp = int(stamp)
    except ValueError:
        raise NetworkFormatError(f"bad timestamp {stamp!r}") from None
    payload = parts[4] if len(parts) == 5 else ""
    return WireMessage(kind, sender, recipient, timestamp, payload)


def format_beliefs(seq: int, beliefs: dict[int, np.ndarray]) -> str:
    chunks = [f"seq={seq}"]
    for v in sorted(beliefs):
        probs = ",".join(repr(float(p)) for p in beliefs[v])
        chunks.append(f"{v}:{probs}")
    return " ".join(chunks)


def parse_beliefs(payload: str) -> tuple[int, dict[int, np.ndarray]]:
    parts = payload.split()
    if not parts or not parts[0].startswith("seq="):
        raise NetworkFormatError(f"belief payload must start with seq=: {payload!r}")
    try:
        seq = int(parts[0][4:])
    except ValueError:
        raise NetworkFormatError(f"bad belief seq in {payload!r}") from None
    beliefs = {}
    for chunk in parts[1:]:
        head, _, tail = chunk.partition(":")
        try:
            var = int(head)
            probs = np.array([float(p) for p in tail.split(",")], dtype=np.float64)
        except ValueError:
            raise NetworkFormatError(f"bad belief chunk {chunk!r}") from None
        beliefs[var] = probs
    return seq, beliefs


def format_linkage(seq: int, src: int, dst: int, joint) -> str:
    probs = ",".join(repr(float(p)) for p in joint)
    return f"seq={seq} link={src}-{dst} joint={probs}"


def is_linkage_payload(payload: str) -> bool:
    parts = payload.split()
    return len(parts) >= 2 and parts[1].startswith("link=")


def parse_linkage(payload: str) -> tuple[int, int, int, np.ndarray]:
    """(seq, src subnet, dst subnet, joint) from a link-form BELIEF."""
    parts = payload.split()
    if len(parts) != 3 or not parts[1].startswith("link=") or not parts[2].startswith("joint="):
        raise NetworkFormatError(f"bad linkage payload {payload!r}")
    try:
        seq = int(parts[0].removeprefix("seq="))
        src_s, _, dst_s = parts[1].removeprefix("link=").partition("-")
        src, dst = int(src_s), int(dst_s)
        joint = np.array(
            [float(p) for p in parts[2].removeprefix("joint=").split(",")],
            dtype=np.float64,
        )
    except ValueError:
        raise NetworkFormatError(f"bad linkage payload {payload!r}") from None
    return seq, src, dst, joint
