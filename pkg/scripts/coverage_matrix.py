#!/usr/bin/env python3
"""Runs the default coverage matrix and prints violation rates per metric"""
import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(PROJECT_ROOT))

import argparse

import pandas as pd

from config.config import settings
from core.types import Partition
from simulation import parse_distribution, run_coverage
from storage.files import FileReportStore

DEFAULT_MATRIX = [
    ("bernoulli(0.01)", 200),
    ("bernoulli(0.05)", 200),
    ("bernoulli(0.3)", 200),
    ("beta(2,5)", 500),
    ("point(0)", 200),
    ("discrete(0:0.5,0.5:0.3,1:0.2)", 200),
    ("0.5*point(0) + 0.5*beta(2,2)", 500),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=2000)
    parser.add_argument("--alpha", type=float, default=settings.ALPHA)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=-1)
    parser.add_argument("--out", type=Path, default=None)
    args = parser.parse_args()

    print("=" * 60)
    print("Coverage matrix")
    print("=" * 60)
    print(f"alpha={args.alpha}  trials={args.trials}  seed={args.seed}  K={settings.PARTITION_K}")

    partition = Partition.uniform(settings.PARTITION_K)
    rows = []
    for spec, n in DEFAULT_MATRIX:
        print(f"\n🎲 {spec}  (n={n})")
        report = run_coverage(
            parse_distribution(spec), n, args.alpha, partition, args.trials, args.seed, n_jobs=args.jobs
        )
        for metric, count in report.violations.items():
            rate = report.violation_rate(metric)
            mark = "✅" if report.within_tolerance(metric) else "❌"
            print(f"   {mark} {metric:<9} {count:>5}/{report.trials}  rate={rate:.4f}  tol={report.tolerance:.4f}")
            rows.append({"distribution": spec, "n": n, "metric": metric, "violations": count, "rate": rate,
                         "tolerance": report.tolerance})

    frame = pd.DataFrame(rows)
    failing = frame[frame["rate"] > frame["tolerance"]]

    print("\n" + "=" * 60)
    print("RESULTS")
    print("=" * 60)
    print(frame.to_string(index=False))
    print(f"\nAbove tolerance: {len(failing)} of {len(frame)}")

    if args.out is not None:
        FileReportStore(args.out).save_table("coverage_matrix", frame)
        print(f"💾 Saved to {args.out}")

    return 1 if len(failing) else 0


if __name__ == "__main__":
    sys.exit(main())
