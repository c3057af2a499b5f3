from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from joblib import Parallel, delayed

from config.config import Settings, settings as default_settings
from core.bounds import (
    clopper_pearson_upper,
    dkw_epsilon,
    expectation_bounds,
    leakage_curve,
    std_dev_upper,
)
from core.errors import IngestionError, UsageError
from core.types import BoundValue, Partition, SampleSet, Sidedness, SignificanceLevel
from scores import BaseScorer
from scores.ed import EdConfig, ed_score, sample_moments
from scores.tokenize import TOKENIZER_NAME
from services.records import EvaluationRecord, group_by_query
from storage.interfaces import AggregateResult, ExceedancePoint, MetricReport, QueryReport
from utils.logger import get_logger

LOGGER = get_logger(__name__)

PARTITION_KINDS = ("uniform", "adapted")
AGGREGATE_FIELDS = ("m_bin", "mu_lower", "mu_upper", "sigma_upper", "ed", "s_mean")


@dataclass(frozen=True)
class QueryEvaluation:
    report: QueryReport
    samples: SampleSet
    partition: Partition


def aggregate_threshold_fraction(reports: Sequence[QueryReport], field: str, threshold: float) -> float:
    """Fraction of queries whose ``field`` is strictly greater than ``threshold``."""
    if field not in AGGREGATE_FIELDS:
        raise UsageError(f"Unknown aggregate field {field!r}; choose one of {', '.join(AGGREGATE_FIELDS)}")
    if not reports:
        raise UsageError("aggregate_threshold_fraction needs at least one report")

    def value(report: QueryReport) -> float | None:
        bound = report.bound(field)
        if bound is not None:
            return bound.value
        return getattr(report, field) if field in ("ed", "s_mean") else None

    values = [value(r) for r in reports]
    present = [v for v in values if v is not None]
    if not present:
        raise UsageError(f"No query carries {field!r} (binary bound needs {{0, 1}} scores)")
    if len(present) < len(values):
        LOGGER.warning(f"{len(values) - len(present)} queries have no {field!r} and are left out")
    return sum(1 for v in present if v > threshold) / len(present)


class EvaluationCoordinator:
    """
    Runs the per-query pipeline: score every record with h, build the sample
    set, compute ED and every applicable bound, and assemble the report.
    """

    def __init__(
        self,
        scorer: BaseScorer,
        *,
        config: Settings | None = None,
        seed: int = 0,
        partition_kind: str = "uniform",
    ):
        if partition_kind not in PARTITION_KINDS:
            raise UsageError(f"Unknown partition kind {partition_kind!r}; choose one of {PARTITION_KINDS}")
        self.scorer = scorer
        self.config = config or default_settings
        self.seed = seed
        self.partition_kind = partition_kind
        self.level = SignificanceLevel.of(self.config.ALPHA)
        self.ed_config = EdConfig(rho=self.config.RHO)

    def _partition_for(self, samples: SampleSet) -> Partition:
        if self.partition_kind == "adapted":
            return Partition.sample_adapted(samples)
        return Partition.uniform(self.config.PARTITION_K)

    def _score(self, query_id: str, records: Sequence[EvaluationRecord]) -> tuple[SampleSet, float | None]:
        if not records:
            raise IngestionError(f"query {query_id!r} has no records")

        kind = records[0].payload_kind
        for record in records:
            if record.payload_kind is not kind:
                raise IngestionError(
                    f"query {query_id!r} mixes {kind.value} and {record.payload_kind.value} records",
                    line_no=record.line_no,
                )
        if kind is not self.scorer.payload:
            raise UsageError(
                f"h={self.scorer.name} needs {self.scorer.payload.value} records, "
                f"query {query_id!r} has {kind.value} records"
                + (f" (line {records[0].line_no})" if records[0].line_no is not None else "")
            )

        sampled = [self.scorer.score(r).score for r in records if not r.greedy]
        greedy = [self.scorer.score(r).score for r in records if r.greedy]
        if not sampled:
            raise IngestionError(f"query {query_id!r} has only greedy records", line_no=records[0].line_no)
        if len(greedy) > 1:
            raise IngestionError(f"query {query_id!r} has {len(greedy)} greedy records, expected at most one")

        return SampleSet.from_scores(sampled), (greedy[0] if greedy else None)

    def _bound(self, value: float, n: int, epsilon: float | None, sidedness: Sidedness) -> BoundValue:
        return BoundValue(value=float(value), alpha=self.level.alpha, n=n, epsilon=epsilon, sidedness=sidedness)

    def evaluate_query(self, query_id: str, records: Sequence[EvaluationRecord]) -> QueryEvaluation:
        samples, deterministic = self._score(query_id, records)
        partition = self._partition_for(samples)
        n = samples.n

        eps_one = dkw_epsilon(n, self.level, Sidedness.ONE_SIDED)
        eps_two = dkw_epsilon(n, self.level, Sidedness.TWO_SIDED)
        mean, sd = sample_moments(samples)

        m_bin = None
        if samples.is_binary:
            m_bin = self._bound(
                clopper_pearson_upper(samples.successes, n, self.level), n, None, Sidedness.ONE_SIDED
            )
        else:
            LOGGER.debug(f"[{query_id}] continuous scores: binary bound skipped")

        grid = np.linspace(0.0, 1.0, self.config.LEAKAGE_GRID_POINTS)
        curve = leakage_curve(samples, self.level, grid)
        expectation = expectation_bounds(samples, self.level, partition)
        sigma = std_dev_upper(samples, self.level, partition, expectation)

        report = QueryReport(
            query_id=query_id,
            n=n,
            h=self.scorer.name,
            s_mean=mean,
            s_sd=sd,
            ed=ed_score(samples, self.ed_config),
            m_bin=m_bin,
            m_gen=[
                ExceedancePoint(x=float(x), bound=self._bound(b, n, eps_one, Sidedness.ONE_SIDED))
                for x, b in zip(grid, curve)
            ],
            mu_lower=self._bound(expectation.mu_lower, n, eps_two, Sidedness.TWO_SIDED),
            mu_upper=self._bound(expectation.mu_upper, n, eps_two, Sidedness.TWO_SIDED),
            sigma_upper=self._bound(sigma, n, eps_two, Sidedness.TWO_SIDED),
            epsilon={Sidedness.ONE_SIDED.value: eps_one, Sidedness.TWO_SIDED.value: eps_two},
            partition={**partition.describe(), "scheme": self.partition_kind},
            deterministic_score=deterministic,
        )
        LOGGER.debug(
            f"[{query_id}] n={n} mean={mean:.4f} mu=[{expectation.mu_lower:.4f}, {expectation.mu_upper:.4f}] "
            f"sigma<={sigma:.4f}"
        )
        return QueryEvaluation(report=report, samples=samples, partition=partition)

    def evaluate(
        self,
        records: Sequence[EvaluationRecord],
        *,
        aggregate_field: str | None = None,
        threshold: float | None = None,
        n_jobs: int | None = None,
    ) -> tuple[MetricReport, list[QueryEvaluation]]:
        groups = group_by_query(records)
        aggregate_field = aggregate_field or self.config.AGGREGATE_FIELD
        threshold = self.config.AGGREGATE_THRESHOLD if threshold is None else threshold

        LOGGER.info(f"Evaluating {len(groups)} queries with h={self.scorer.name}, alpha={self.level.alpha}")
        evaluations = Parallel(n_jobs=n_jobs or self.config.N_JOBS)(
            delayed(self.evaluate_query)(query_id, group) for query_id, group in groups.items()
        )
        reports = [e.report for e in evaluations]
        fraction = aggregate_threshold_fraction(reports, aggregate_field, threshold)
        LOGGER.info(f"{fraction:.1%} of queries have {aggregate_field} > {threshold}")

        report = MetricReport(
            schema=self.config.REPORT_SCHEMA,
            settings={
                "alpha": self.level.alpha,
                "partition_k": self.config.PARTITION_K,
                "partition": self.partition_kind,
                "rho": self.ed_config.rho,
                "seed": self.seed,
                "h": self.scorer.name,
                "tokenizer": TOKENIZER_NAME,
                "grid_points": self.config.LEAKAGE_GRID_POINTS,
            },
            queries=reports,
            aggregate=AggregateResult(field=aggregate_field, threshold=threshold, fraction=fraction),
        )
        return report, evaluations


__all__ = [
    "EvaluationCoordinator",
    "QueryEvaluation",
    "aggregate_threshold_fraction",
    "PARTITION_KINDS",
    "AGGREGATE_FIELDS",
]
