"""Connection-record schema and raw-file parsing.

The record layout is the 41-attribute network-connection format used by
the KDD Cup 1999 dataset: comma-separated, one connection per line, a
text label in field 42.  Labels may carry a trailing period, which the
parser strips.
"""

from dataclasses import dataclass

from sentinet.errors import MalformedLineError, UnknownLabelError

# (name, kind) per attribute, in file order.  kind is "continuous" or
# "symbolic" and decides the discretization strategy.
ATTRIBUTES: tuple[tuple[str, str], ...] = (
    ("duration", "continuous"),
    ("protocol_type", "symbolic"),
    ("service", "symbolic"),
    ("flag", "symbolic"),
    ("src_bytes", "continuous"),
    ("dst_bytes", "continuous"),
    ("land", "symbolic"),
    ("wrong_fragment", "continuous"),
    ("urgent", "continuous"),
    ("hot", "continuous"),
    ("num_failed_logins", "continuous"),
    ("logged_in", "symbolic"),
    ("num_compromised", "continuous"),
    ("root_shell", "continuous"),
    ("su_attempted", "continuous"),
    ("num_root", "continuous"),
    ("num_file_creations", "continuous"),
    ("num_shells", "continuous"),
    ("num_access_files", "continuous"),
    ("num_outbound_cmds", "continuous"),
    ("is_host_login", "symbolic"),
    ("is_guest_login", "symbolic"),
    ("count", "continuous"),
    ("srv_count", "continuous"),
    ("serror_rate", "continuous"),
    ("srv_serror_rate", "continuous"),
    ("rerror_rate", "continuous"),
    ("srv_rerror_rate", "continuous"),
    ("same_srv_rate", "continuous"),
    ("diff_srv_rate", "continuous"),
    ("srv_diff_host_rate", "continuous"),
    ("dst_host_count", "continuous"),
    ("dst_host_srv_count", "continuous"),
    ("dst_host_same_srv_rate", "continuous"),
    ("dst_host_diff_srv_rate", "continuous"),
    ("dst_host_same_src_port_rate", "continuous"),
    ("dst_host_srv_diff_host_rate", "continuous"),
    ("dst_host_serror_rate", "continuous"),
    ("dst_host_srv_serror_rate", "continuous"),
    ("dst_host_rerror_rate", "continuous"),
    ("dst_host_srv_rerror_rate", "continuous"),
)

N_ATTRIBUTES = len(ATTRIBUTES)
ATTRIBUTE_NAMES = tuple(name for name, _ in ATTRIBUTES)
ATTRIBUTE_KINDS = tuple(kind for _, kind in ATTRIBUTES)

# Canonical activity classes; extra classes learned later are appended
# after these.
BASE_CLASSES = ("normal", "dos", "r2l", "u2r", "probe")


@dataclass(frozen=True)
class ConnectionRecord:
    values: tuple[str, ...]
    label: str


def parse_kdd_line(line: str, line_no: int) -> ConnectionRecord:
    fields = [f.strip() for f in line.split(",")]
    if len(fields) != N_ATTRIBUTES + 1:
        raise MalformedLineError(
            line_no, f"expected {N_ATTRIBUTES + 1} fields, got {len(fields)}"
        )
    label = fields[-1].rstrip(".")
    if not label:
        raise MalformedLineError(line_no, "empty label")
    return ConnectionRecord(tuple(fields[:-1]), label)


def parse_kdd(path, on_error: str = "raise"):
    """Parse a comma-separated connection file.

    With on_error="raise" returns the record list, failing on the first
    bad line.  With on_error="collect" returns (records, errors) where
    errors keeps one MalformedLineError per unusable line.
    """
    if on_error not in ("raise", "collect"):
        raise ValueError(f"on_error must be 'raise' or 'collect', got {on_error!r}")
    records = []
    errors = []
    with open(path, "r", encoding="ascii") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                records.append(parse_kdd_line(line, line_no))
            except MalformedLineError as err:
                if on_error == "raise":
                    raise
                errors.append(err)
    if on_error == "collect":
        return records, errors
    return records


def load_label_map(path) -> dict[str, str]:
    """Read `label class` lines into a mapping; '#' starts a comment."""
    table = {}
    with open(path, "r", encoding="ascii") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise MalformedLineError(line_no, f"expected `label class`, got {line!r}")
            label, cls = parts
            if cls not in BASE_CLASSES:
                raise MalformedLineError(line_no, f"unknown class {cls!r}")
            table[label] = cls
    return table


def map_label(label: str, table: dict[str, str]) -> str:
    try:
        return table[label]
    except KeyError:
        raise UnknownLabelError(f"no class mapping for label {label!r}") from None
