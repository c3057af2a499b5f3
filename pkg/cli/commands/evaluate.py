from __future__ import annotations

import argparse
from pathlib import Path

from config.config import settings
from core.errors import UsageError
from core.coordinator import AGGREGATE_FIELDS, PARTITION_KINDS, EvaluationCoordinator
from scores import SCORER_NAMES, get_scorer
from services.plots import convergence_table, cdf_table, histogram_table
from services.records import load_records
from storage.files import FileReportStore
from storage.interfaces import ReportStore
from utils.logger import get_logger

LOGGER = get_logger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("evaluate", help="Compute guaranteed metrics for every query in a records file")
    parser.add_argument("--input", required=True, type=Path, help="JSON-lines records file")
    parser.add_argument("--h", dest="h", choices=SCORER_NAMES, default="score", help="Leakage measure")
    parser.add_argument("--alpha", type=float, default=None)
    parser.add_argument("--partition-k", type=int, default=None)
    parser.add_argument("--partition", choices=PARTITION_KINDS, default="uniform")
    parser.add_argument("--rho", type=float, default=None)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", required=True, type=Path, help="Output directory")
    parser.add_argument("--plots", action="store_true", help="Also write plot-ready CSV tables")
    parser.add_argument("--aggregate-field", choices=AGGREGATE_FIELDS, default=None)
    parser.add_argument("--threshold", type=float, default=None)
    parser.add_argument("--jobs", type=int, default=None)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    if args.seed < 0:
        raise UsageError(f"--seed must be non-negative, got {args.seed}")
    config = settings.override(ALPHA=args.alpha, PARTITION_K=args.partition_k, RHO=args.rho)
    coordinator = EvaluationCoordinator(
        get_scorer(args.h),
        config=config,
        seed=args.seed,
        partition_kind=args.partition,
    )
    records = load_records(args.input)
    report, evaluations = coordinator.evaluate(
        records,
        aggregate_field=args.aggregate_field,
        threshold=args.threshold,
        n_jobs=args.jobs,
    )

    store: ReportStore = FileReportStore(args.out)
    store.save_report(report)

    if args.plots:
        for evaluation in evaluations:
            query_id = evaluation.report.query_id
            store.save_table(f"{query_id}_histogram", histogram_table(evaluation.samples))
            store.save_table(
                f"{query_id}_cdf", cdf_table(evaluation.samples, coordinator.level, evaluation.partition)
            )
            store.save_table(
                f"{query_id}_convergence",
                convergence_table(evaluation.samples, coordinator.level, evaluation.partition, args.seed),
            )
        LOGGER.info(f"Plot tables written for {len(evaluations)} queries")

    aggregate = report.aggregate
    print(f"queries: {len(report.queries)}")
    print(f"{aggregate.field} > {aggregate.threshold}: {aggregate.fraction:.4f}")
    print(f"report: {store.report_path}")
    return 0
