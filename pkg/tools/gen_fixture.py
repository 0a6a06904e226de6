#!/usr/bin/env python3
"""Generate the bundled 100-line connection-record fixture and its manifest.

The manifest is counted from the emitted text with plain string splitting,
on purpose: the package's own parser is tested against these counts, so
they must not come from that parser.

Usage: python3 tools/gen_fixture.py [outdir]
"""

import random
import sys
from pathlib import Path

SEED = 20250814

# label -> (category, count in the fixture)
LABELS = {
    "normal": ("normal", 30),
    "smurf": ("dos", 28),
    "neptune": ("dos", 22),
    "back": ("dos", 3),
    "teardrop": ("dos", 2),
    "satan": ("probe", 4),
    "ipsweep": ("probe", 3),
    "portsweep": ("probe", 2),
    "nmap": ("probe", 1),
    "guess_passwd": ("r2l", 2),
    "warezclient": ("r2l", 2),
    "buffer_overflow": ("u2r", 1),
}


def rate(x: float) -> str:
    return f"{x:.2f}"


def base_fields(rng: random.Random) -> dict:
    return {
        "duration": 0,
        "protocol_type": "tcp",
        "service": "http",
        "flag": "SF",
        "src_bytes": 0,
        "dst_bytes": 0,
        "land": 0,
        "wrong_fragment": 0,
        "urgent": 0,
        "hot": 0,
        "num_failed_logins": 0,
        "logged_in": 0,
        "num_compromised": 0,
        "root_shell": 0,
        "su_attempted": 0,
        "num_root": 0,
        "num_file_creations": 0,
        "num_shells": 0,
        "num_access_files": 0,
        "num_outbound_cmds": 0,
        "is_host_login": 0,
        "is_guest_login": 0,
        "count": rng.randint(1, 20),
        "srv_count": rng.randint(1, 20),
        "serror_rate": rate(0.0),
        "srv_serror_rate": rate(0.0),
        "rerror_rate": rate(0.0),
        "srv_rerror_rate": rate(0.0),
        "same_srv_rate": rate(1.0),
        "diff_srv_rate": rate(0.0),
        "srv_diff_host_rate": rate(0.0),
        "dst_host_count": rng.randint(1, 255),
        "dst_host_srv_count": rng.randint(1, 255),
        "dst_host_same_srv_rate": rate(1.0),
        "dst_host_diff_srv_rate": rate(0.0),
        "dst_host_same_src_port_rate": rate(rng.choice([0.0, 0.5, 1.0])),
        "dst_host_srv_diff_host_rate": rate(0.0),
        "dst_host_serror_rate": rate(0.0),
        "dst_host_srv_serror_rate": rate(0.0),
        "dst_host_rerror_rate": rate(0.0),
        "dst_host_srv_rerror_rate": rate(0.0),
    }


def shape(label: str, f: dict, rng: random.Random) -> None:
    if label == "normal":
        f["service"] = rng.choice(["http", "http", "smtp", "ftp_data"])
        f["src_bytes"] = rng.randint(100, 2000)
        f["dst_bytes"] = rng.randint(300, 6000)
        f["logged_in"] = 1
        f["duration"] = rng.choice([0, 0, 1, 2, 5])
    elif label == "smurf":
        f.update(protocol_type="icmp", service="ecr_i", src_bytes=1032)
        f["count"] = rng.randint(400, 511)
        f["srv_count"] = f["count"]
    elif label == "neptune":
        f.update(service="private", flag="S0")
        f["count"] = rng.randint(100, 300)
        for k in ("serror_rate", "srv_serror_rate",
                  "dst_host_serror_rate", "dst_host_srv_serror_rate"):
            f[k] = rate(1.0)
        f["same_srv_rate"] = rate(0.06)
        f["dst_host_same_srv_rate"] = rate(0.06)
    elif label == "back":
        f["src_bytes"] = rng.randint(54000, 54540)
        f["dst_bytes"] = rng.randint(8000, 8500)
        f["logged_in"] = 1
        f["hot"] = 2
    elif label == "teardrop":
        f.update(protocol_type="udp", service="private", wrong_fragment=3)
        f["src_bytes"] = 28
    elif label == "satan":
        f.update(service="private", flag="REJ")
        f["diff_srv_rate"] = rate(0.8)
        f["rerror_rate"] = rate(1.0)
        f["srv_rerror_rate"] = rate(1.0)
        f["dst_host_rerror_rate"] = rate(1.0)
    elif label == "ipsweep":
        f.update(protocol_type="icmp", service="eco_i", src_bytes=8)
        f["same_srv_rate"] = rate(0.5)
    elif label == "portsweep":
        f.update(service="private", flag="REJ", src_bytes=0)
        f["rerror_rate"] = rate(1.0)
        f["dst_host_rerror_rate"] = rate(1.0)
    elif label == "nmap":
        f.update(protocol_type="icmp", service="eco_i", src_bytes=8)
    elif label == "guess_passwd":
        f.update(service="ftp", num_failed_logins=5, duration=rng.randint(1, 4))
        f["src_bytes"] = 125
        f["dst_bytes"] = 179
        f["hot"] = 1
    elif label == "warezclient":
        f.update(service="ftp_data", is_guest_login=1, logged_in=1)
        f["src_bytes"] = rng.randint(200000, 800000)
        f["duration"] = rng.randint(100, 900)
        f["hot"] = rng.randint(10, 30)
    elif label == "buffer_overflow":
        f.update(service="telnet", logged_in=1, root_shell=1, hot=3)
        f["duration"] = rng.randint(100, 320)
        f["src_bytes"] = rng.randint(1000, 1600)
        f["dst_bytes"] = rng.randint(300, 500)
        f["num_compromised"] = 1
        f["num_root"] = 2
        f["num_file_creations"] = 1


def main() -> int:
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("src/sentinet/data")
    rng = random.Random(SEED)
    rows = []
    for label, (_, n) in LABELS.items():
        for _ in range(n):
            f = base_fields(rng)
            shape(label, f, rng)
            rows.append(",".join(str(v) for v in f.values()) + f",{label}.")
    rng.shuffle(rows)
    fixture = outdir / "kdd_fixture.csv"
    fixture.write_text("\n".join(rows) + "\n")

    # Independent recount straight off the written bytes.
    label_counts: dict[str, int] = {}
    lines = fixture.read_text().splitlines()
    for line in lines:
        label = line.split(",")[41].rstrip(".")
        label_counts[label] = label_counts.get(label, 0) + 1
    class_counts: dict[str, int] = {}
    for label, c in label_counts.items():
        cat = LABELS[label][0]
        class_counts[cat] = class_counts.get(cat, 0) + c

    manifest = [f"records {len(lines)}"]
    manifest += [f"label {k} {v}" for k, v in sorted(label_counts.items())]
    manifest += [f"class {k} {v}" for k, v in sorted(class_counts.items())]
    (outdir / "kdd_fixture.manifest").write_text("\n".join(manifest) + "\n")
    print(f"wrote {fixture} ({len(lines)} records)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
