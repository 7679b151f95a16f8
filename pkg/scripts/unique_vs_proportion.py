"""Regress the proportion of RI runs beating PCI on the number of unique final chains.

By default reads the JSON reports of the quasi-linear cases written by
``reproduce_tables.py``. With ``--published`` it instead fits the twelve
published (unique, proportion) pairs, which is a consistency check of the
published regression table.

    python3 scripts/unique_vs_proportion.py results/study
    python3 scripts/unique_vs_proportion.py --published
"""

import argparse
import json
import sys
from pathlib import Path

from sominit.experiment import QUASI_LINEAR, ols_fit

PUBLISHED = [
    (2, 1.00), (34, 0.33), (47, 0.13), (11, 0.73), (50, 0.08), (47, 0.72),
    (11, 0.36), (67, 0.07), (65, 0.07), (2, 0.48), (49, 0.09), (58, 0.11),
]


def pairs_from_reports(root, quasi_only=True):
    out = []
    for path in sorted(Path(root).rglob("*.json")):
        doc = json.loads(path.read_text(encoding="utf-8"))
        if not doc.get("schema", "").startswith("sominit.experiment-report/"):
            continue
        if quasi_only and doc["classification"]["label"] != QUASI_LINEAR:
            continue
        out.append((doc["unique_configurations"]["count"], doc["proportion_better"]["p_hat"], path.stem))
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("root", nargs="?", help="directory of experiment reports")
    ap.add_argument("--published", action="store_true")
    ap.add_argument("--all", action="store_true", help="include nonlinear cases too")
    args = ap.parse_args(argv)

    if args.published:
        pairs = [(u, p, "") for u, p in PUBLISHED]
    elif args.root:
        pairs = pairs_from_reports(args.root, quasi_only=not args.all)
    else:
        ap.error("give a report directory or --published")

    for u, p, name in pairs:
        print(f"{name:>24}  unique={u:4d}  proportion={p:.2f}")
    if len(pairs) < 3:
        print("fewer than three cases; no regression", file=sys.stderr)
        return 1
    fit = ols_fit([u for u, _, _ in pairs], [p for _, p, _ in pairs])
    print(f"intercept {fit.intercept:.3f} (se {fit.intercept_std_error:.3f}, t {fit.intercept_t:.3f})")
    print(f"slope     {fit.slope:.3f} (se {fit.slope_std_error:.3f}, t {fit.t_statistic:.3f}, beta {fit.beta:.3f})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
