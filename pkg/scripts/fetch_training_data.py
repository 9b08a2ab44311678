#!/usr/bin/env python3
"""Rebuild data/train.csv from publicly distributed copies.

The Kaggle Titanic training CSV is not redistributed with this
repository. Two packages on PyPI ship processed copies that together
contain every original field:

* PDPbox 0.3.0 bundles the exact 891 training rows in passenger order
  with verbatim Name/Ticket/Fare, but encodes Sex as 0/1, drops Cabin,
  median-imputes missing ages to 28.0, and fills the two missing
  Embarked cells with "S".
* dabl 0.3.2 bundles the full 1309-row titanic3 table ("?" for missing)
  with true ages, cabins, and embarkation ports.

Joining the two on passenger name restores the original file. The
result is verified against a pinned SHA-256 before it is written.

Usage:
    python3 scripts/fetch_training_data.py
    python3 scripts/fetch_training_data.py --wheel-dir ./wheels
    python3 scripts/fetch_training_data.py --index-url https://pypi.org/simple

Requires network access for pip unless --wheel-dir points at a
directory that already holds the two wheels.
"""

import argparse
import csv
import hashlib
import io
import subprocess
import sys
import tempfile
import zipfile
from pathlib import Path

EXPECTED_SHA256 = (
    "54da479bb8ce5d12463d93b4f03f8d8409fdc2b089f13648f9e6d3437efa851c"
)
PINS = ("pdpbox==0.3.0", "dabl==0.3.2")
HEADER = ("PassengerId,Survived,Pclass,Name,Sex,Age,SibSp,Parch,"
          "Ticket,Fare,Cabin,Embarked")


def download_wheels(dest: Path, index_url: str | None) -> None:
    cmd = [sys.executable, "-m", "pip", "download", *PINS,
           "--no-deps", "-d", str(dest)]
    if index_url:
        cmd += ["--index-url", index_url]
    subprocess.run(cmd, check=True)


def read_wheel_csv(wheel_dir: Path, prefix: str, member: str) -> list[list[str]]:
    matches = sorted(wheel_dir.glob(f"{prefix}-*.whl"))
    if not matches:
        sys.exit(f"error: no {prefix} wheel found in {wheel_dir}")
    with zipfile.ZipFile(matches[0]) as z:
        with io.TextIOWrapper(z.open(member), encoding="utf-8") as fh:
            return list(csv.reader(fh))


def trim(number: str) -> str:
    """Two-decimal rounding with trailing zeros dropped: 80.00 -> 80."""
    s = f"{float(number):.2f}".rstrip("0").rstrip(".")
    return s or "0"


def rebuild(pdp_rows: list[list[str]], t3_rows: list[list[str]]) -> bytes:
    # titanic3 writes nicknames in single quotes where the original uses
    # double quotes, and the original has trailing spaces in two names.
    by_name: dict[str, list[list[str]]] = {}
    for r in t3_rows:
        by_name.setdefault(r[2].replace("'", '"').strip(), []).append(r)

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(HEADER.split(","))
    for row in pdp_rows:
        pid, surv, pcl, name, sex_n, age_p, sibsp, parch, ticket, fare, emb \
            = row[:11]
        cands = by_name[name.replace("'", '"').strip()]
        if len(cands) > 1:
            # two passengers share a name; the ticket tells them apart
            cands = [c for c in cands if c[7] == ticket]
        (t3,) = cands
        sex = "male" if sex_n == "1" else "female"
        if (t3[0], t3[1], t3[3], t3[5], t3[6]) != (pcl, surv, sex,
                                                   sibsp, parch):
            sys.exit(f"error: sources disagree on passenger {pid}")
        if t3[4] == "?":
            if float(age_p) != 28.0:  # only imputed ages may be missing
                sys.exit(f"error: unexpected age for passenger {pid}")
            age = ""
        else:
            age = trim(t3[4])
        if t3[10] != "?" and t3[10] != emb:
            sys.exit(f"error: embarkation mismatch for passenger {pid}")
        writer.writerow([
            pid, surv, pcl, name, sex, age, sibsp, parch,
            ticket, trim(fare),
            "" if t3[9] == "?" else t3[9],
            "" if t3[10] == "?" else emb,
        ])
    return out.getvalue().encode("utf-8")


def main() -> None:
    repo = Path(__file__).resolve().parent.parent
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--dest", default=str(repo / "data" / "train.csv"),
                    help="output path (default: data/train.csv)")
    ap.add_argument("--wheel-dir",
                    help="directory already holding the two wheels "
                         "(skips the download)")
    ap.add_argument("--index-url",
                    help="alternative package index for pip download")
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        wheel_dir = Path(args.wheel_dir) if args.wheel_dir else Path(tmp)
        if not args.wheel_dir:
            download_wheels(wheel_dir, args.index_url)
        pdp = read_wheel_csv(wheel_dir, "PDPbox",
                             "pdpbox/examples/titanic/titanic_data.csv")
        t3 = read_wheel_csv(wheel_dir, "dabl", "dabl/datasets/titanic.csv")

    if len(pdp) - 1 != 891 or len(t3) - 1 != 1309:
        sys.exit("error: unexpected row counts in the source wheels")
    data = rebuild(pdp[1:], t3[1:])

    digest = hashlib.sha256(data).hexdigest()
    if digest != EXPECTED_SHA256:
        sys.exit(f"error: rebuilt file hashes to {digest}, expected "
                 f"{EXPECTED_SHA256}; refusing to write")
    dest = Path(args.dest)
    dest.parent.mkdir(parents=True, exist_ok=True)
    dest.write_bytes(data)
    print(f"wrote {dest} (891 rows, sha256 verified)")


if __name__ == "__main__":
    main()
