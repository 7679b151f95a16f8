"""Run the full PCI-vs-RI case study and write all reports.

Covers every dataset/K combination of the original study on regenerated
point clouds, writing one JSON report plus histogram CSV/SVG per case and a
combined summary table (proportions, FVU distribution, unique
configurations, classification).

    python3 scripts/reproduce_tables.py --out results/study --workers 4
"""

import argparse
import sys
from pathlib import Path

from sominit._atomic import atomic_write_text
from sominit.cli import run_experiment
from sominit.config import ExperimentConfig
from sominit.datasets import DEFAULT_NOISE
from sominit.report import summary_csv, summary_text

CASES = [
    ("spiral3", False, (10, 20, 50)),
    ("spiral3", True, (10, 20, 50)),
    ("horseshoe", False, (10, 20, 50)),
    ("horseshoe", True, (10, 20, 50, 100)),
    ("tree", False, (10, 20, 50, 100)),
    ("s_shape", False, (10, 20, 50)),
    ("s_shape", True, (10, 20, 50)),
    ("c_shape", False, (10, 20, 30)),
    ("c_shape", True, (10, 20, 30)),
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/study")
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--data-seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)

    reports = []
    for family, noisy, ks in CASES:
        cfg = ExperimentConfig(
            shape=family,
            n=args.n,
            noise=DEFAULT_NOISE[family] if noisy else 0.0,
            data_seed=args.data_seed,
            ks=ks,
            trials=args.trials,
            workers=args.workers,
            out_dir=str(Path(args.out) / (family + ("_noise" if noisy else ""))),
        ).validate()
        print(f"{family}{' + noise' if noisy else ''}: K = {', '.join(map(str, ks))}", file=sys.stderr)
        reports.extend(run_experiment(cfg))

    atomic_write_text(Path(args.out) / "summary.csv", summary_csv(reports))
    sys.stdout.write(summary_text(reports))
    return 0


if __name__ == "__main__":
    sys.exit(main())
