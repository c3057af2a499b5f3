#!/usr/bin/env python3
"""Mean bound gaps over a grid of sample sizes and partition resolutions"""
import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(PROJECT_ROOT))

import argparse

from config.config import settings
from simulation import parse_distribution, tightness_sweep
from storage.files import FileReportStore


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dist", default="beta(2,5)")
    parser.add_argument("--n", type=int, nargs="+", default=[100, 1000, 10000])
    parser.add_argument("--k", type=int, nargs="+", default=[1, 10, 100])
    parser.add_argument("--trials", type=int, default=20)
    parser.add_argument("--alpha", type=float, default=settings.ALPHA)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=-1)
    parser.add_argument("--out", type=Path, default=None)
    args = parser.parse_args()

    print("=" * 60)
    print(f"Tightness sweep: {args.dist}")
    print("=" * 60)

    table = tightness_sweep(
        parse_distribution(args.dist),
        args.n,
        args.k,
        args.alpha,
        args.seed,
        trials=args.trials,
        n_jobs=args.jobs,
    )
    print(table.to_string(index=False, float_format=lambda v: f"{v:.5f}"))

    if args.out is not None:
        FileReportStore(args.out).save_table("tightness_sweep", table)
        print(f"\n💾 Saved to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
