#!/usr/bin/env python3
"""Materialize the benchmark datasets into the occkit on-disk format.

Writes data/uci/<name>/{schema.json,data.jsonl}. Values are stored raw; the
loader fits the affine normalization at load time.

Sources, in order of preference:
  iris      scikit-learn's bundled copy (exact UCI data)
  breastw   ucimlrepo (UCI id 15, "Breast Cancer Wisconsin (Original)")
  ecoli     ucimlrepo (UCI id 39)
  diabetes  ucimlrepo (UCI id 37, Pima Indians Diabetes)

The last three need network access to the UCI repository; when unavailable
they are skipped and the benchmark runner reports them as such.
"""

import argparse
import json
import sys
from pathlib import Path


def write_dataset(out_dir: Path, name: str, feature_names, rows, is_target):
    d = out_dir / name
    d.mkdir(parents=True, exist_ok=True)
    schema = {
        "format": "occkit-schema/1",
        "features": [{"name": fn, "kind": "quantitative"} for fn in feature_names],
    }
    (d / "schema.json").write_text(json.dumps(schema, indent=2) + "\n")
    with open(d / "data.jsonl", "w") as f:
        for row, target in zip(rows, is_target):
            f.write(json.dumps({"values": [float(v) for v in row], "target": bool(target)}) + "\n")
    n_target = sum(is_target)
    print(f"{name}: {len(rows)} rows ({n_target} target / {len(rows) - n_target} non-target)")


def fetch_iris(out_dir: Path) -> bool:
    try:
        from sklearn.datasets import load_iris
    except ImportError:
        print("iris: scikit-learn not available", file=sys.stderr)
        return False
    ds = load_iris()
    is_target = [ds.target_names[t] == "setosa" for t in ds.target]
    write_dataset(out_dir, "iris", list(ds.feature_names), ds.data.tolist(), is_target)
    return True


def fetch_ucimlrepo(out_dir: Path, name: str, uci_id: int, target_label: str,
                    label_column: str | None = None) -> bool:
    try:
        from ucimlrepo import fetch_ucirepo
    except ImportError:
        print(f"{name}: ucimlrepo not installed (pip install ucimlrepo)", file=sys.stderr)
        return False
    try:
        repo = fetch_ucirepo(id=uci_id)
    except Exception as e:
        print(f"{name}: fetch failed: {e}", file=sys.stderr)
        return False
    X = repo.data.features
    y = repo.data.targets
    col = label_column or y.columns[0]
    rows, is_target = [], []
    for i in range(len(X)):
        values = X.iloc[i].tolist()
        if any(v is None or (isinstance(v, float) and v != v) for v in values):
            continue   # drop rows with missing attribute values
        rows.append(values)
        is_target.append(str(y[col].iloc[i]) == target_label)
    write_dataset(out_dir, name, list(X.columns), rows, is_target)
    return True


def main():
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", type=Path, default=Path("data/uci"))
    ap.add_argument("--datasets", nargs="*",
                    default=["iris", "breastw", "ecoli", "diabetes"])
    args = ap.parse_args()

    ok = {}
    if "iris" in args.datasets:
        ok["iris"] = fetch_iris(args.out)
    if "breastw" in args.datasets:
        # target class: benign (coded 2)
        ok["breastw"] = fetch_ucimlrepo(args.out, "breastw", 15, "2")
    if "ecoli" in args.datasets:
        ok["ecoli"] = fetch_ucimlrepo(args.out, "ecoli", 39, "pp")
    if "diabetes" in args.datasets:
        # target class: tested_negative (coded 0), the majority class
        ok["diabetes"] = fetch_ucimlrepo(args.out, "diabetes", 37, "0")

    failed = [k for k, v in ok.items() if not v]
    if failed:
        print(f"unavailable: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
