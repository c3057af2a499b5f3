from __future__ import annotations

import argparse
from pathlib import Path

from config.config import settings
from core.types import Partition
from simulation import METRICS, exact_violation_rates, parse_distribution, run_coverage
from storage.files import FileReportStore, render_json
from utils.logger import get_logger

LOGGER = get_logger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("simulate", help="Monte Carlo coverage check against a known distribution")
    parser.add_argument("--dist", required=True, help="e.g. 'beta(2,5)', 'bernoulli(0.05)', '0.5*point(0) + 0.5*beta(2,2)'")
    parser.add_argument("--n", type=int, default=settings.N_SAMPLES)
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--alpha", type=float, default=settings.ALPHA)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--partition-k", type=int, default=settings.PARTITION_K)
    parser.add_argument("--metrics", nargs="+", choices=METRICS, default=None)
    parser.add_argument("--exact", action="store_true", help="Also enumerate exact violation rates (small discrete laws)")
    parser.add_argument("--out", type=Path, default=None, help="Directory for coverage.json")
    parser.add_argument("--jobs", type=int, default=None)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    dist = parse_distribution(args.dist)
    partition = Partition.uniform(args.partition_k)
    report = run_coverage(
        dist,
        args.n,
        args.alpha,
        partition,
        args.trials,
        args.seed,
        metrics=args.metrics,
        n_jobs=args.jobs,
    )
    document = {"schema": settings.REPORT_SCHEMA, "coverage": report.to_dict()}
    if args.exact:
        document["exact_violation_rate"] = exact_violation_rates(
            dist, args.n, args.alpha, partition, metrics=args.metrics
        )

    if args.out is not None:
        FileReportStore(args.out).save_document("coverage", document)
    print(render_json(document), end="")

    failing = [m for m in report.violations if not report.within_tolerance(m)]
    if failing:
        LOGGER.warning(f"Violation rate above tolerance for: {', '.join(failing)}")
    return 0
