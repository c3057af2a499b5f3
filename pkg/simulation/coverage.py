"""
Monte Carlo coverage harness.

Each trial draws n scores from a KnownDistribution, computes every bound and
records whether it missed the analytic truth. Trial t always uses the stream
derived from (seed, t), so results do not depend on worker count or order.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from config.config import settings
from core.bounds import (
    cdf_band,
    clopper_pearson_upper,
    dkw_epsilon,
    expectation_bounds,
    leakage_curve,
    std_dev_upper,
)
from core.errors import DomainError
from core.types import Partition, SampleSet, Sidedness, SignificanceLevel
from simulation.distributions import KnownDistribution
from simulation.rng import GENERATOR_NAME, trial_generator
from utils.logger import get_logger

LOGGER = get_logger(__name__)

METRICS = ("bin", "gen", "cdf_band", "mu", "sigma")
MEDIAN_THRESHOLD = 0.5
# absorbs float noise in predicates that are exact equalities in real arithmetic
VIOLATION_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class GroundTruth:
    grid: np.ndarray
    cdf_grid: np.ndarray
    exceed_grid: np.ndarray
    exceed_median: float
    mean: float
    sd: float
    p_one: float | None

    @classmethod
    def of(cls, dist: KnownDistribution, grid: np.ndarray) -> "GroundTruth":
        cdf_grid = np.asarray(dist.cdf(grid), dtype=np.float64)
        return cls(
            grid=grid,
            cdf_grid=cdf_grid,
            exceed_grid=1.0 - cdf_grid,
            exceed_median=float(dist.exceedance(MEDIAN_THRESHOLD)),
            mean=dist.mean,
            sd=dist.sd,
            p_one=dist.mean if dist.is_binary else None,
        )


def evaluate_trial(
    samples: SampleSet,
    truth: GroundTruth,
    level: SignificanceLevel,
    partition: Partition,
    metrics: Sequence[str],
) -> tuple[dict[str, bool], dict[str, float]]:
    """Violation flags and bound-minus-truth gaps for one sample set."""
    violated: dict[str, bool] = {}
    gaps: dict[str, float] = {}

    if "bin" in metrics:
        bound = clopper_pearson_upper(samples.successes, samples.n, level)
        violated["bin"] = bound < truth.p_one - VIOLATION_SLACK
        gaps["bin"] = bound - truth.p_one

    if "gen" in metrics:
        curve = leakage_curve(samples, level, truth.grid)
        violated["gen"] = bool(np.any(curve < truth.exceed_grid - VIOLATION_SLACK))
        at_median = float(leakage_curve(samples, level, np.array([MEDIAN_THRESHOLD]))[0])
        gaps["gen"] = at_median - truth.exceed_median

    if "cdf_band" in metrics:
        band = cdf_band(samples, level, Sidedness.TWO_SIDED)
        lower = band.lower(truth.grid)
        upper = band.upper(truth.grid)
        violated["cdf_band"] = bool(
            np.any(truth.cdf_grid < lower - VIOLATION_SLACK) or np.any(truth.cdf_grid > upper + VIOLATION_SLACK)
        )
        gaps["cdf_band"] = float(np.mean(upper - lower))

    if "mu" in metrics or "sigma" in metrics:
        expectation = expectation_bounds(samples, level, partition)
        if "mu" in metrics:
            violated["mu"] = not expectation.contains(truth.mean, slack=VIOLATION_SLACK)
            gaps["mu"] = expectation.mu_upper - truth.mean
            gaps["mu_width"] = expectation.width
        if "sigma" in metrics:
            sigma = std_dev_upper(samples, level, partition, expectation)
            violated["sigma"] = sigma < truth.sd - VIOLATION_SLACK
            gaps["sigma"] = sigma - truth.sd

    return violated, gaps


@dataclass(frozen=True)
class TrialReport:
    distribution: str
    trials: int
    n: int
    alpha: float
    k: int
    seed: int
    violations: dict[str, int]
    mean_bound_gap: dict[str, float]
    skipped: tuple[str, ...] = ()
    generator: str = GENERATOR_NAME
    epsilon: dict[str, float] = field(default_factory=dict)

    def violation_rate(self, metric: str) -> float:
        return self.violations[metric] / self.trials

    @property
    def tolerance(self) -> float:
        """alpha plus three binomial standard errors."""
        return self.alpha + 3.0 * math.sqrt(self.alpha * (1.0 - self.alpha) / self.trials)

    def within_tolerance(self, metric: str) -> bool:
        return self.violation_rate(metric) <= self.tolerance

    def to_dict(self) -> dict:
        data = asdict(self)
        data["skipped"] = list(self.skipped)
        data["violation_rate"] = {m: self.violation_rate(m) for m in self.violations}
        data["tolerance"] = self.tolerance
        return data


def resolve_metrics(dist: KnownDistribution, metrics: Iterable[str] | None) -> tuple[list[str], list[str]]:
    requested = list(METRICS if metrics is None else metrics)
    unknown = [m for m in requested if m not in METRICS]
    if unknown:
        raise DomainError(f"Unknown metrics {unknown}; known: {', '.join(METRICS)}")
    skipped = []
    if "bin" in requested and not dist.is_binary:
        LOGGER.warning(f"Skipping binary metric: {dist.describe()} is not a {{0, 1}} distribution")
        requested.remove("bin")
        skipped.append("bin")
    return requested, skipped


def _run_trial(dist, n, level, partition, truth, metrics, seed, trial):
    rng = trial_generator(seed, trial)
    samples = SampleSet(dist.sample(rng, n))
    return evaluate_trial(samples, truth, level, partition, metrics)


def run_coverage(
    dist: KnownDistribution,
    n: int,
    alpha: SignificanceLevel | float,
    partition: Partition,
    trials: int,
    seed: int,
    *,
    metrics: Iterable[str] | None = None,
    grid_points: int | None = None,
    n_jobs: int | None = None,
) -> TrialReport:
    level = SignificanceLevel.of(alpha)
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    grid_points = grid_points or settings.LEAKAGE_GRID_POINTS
    n_jobs = n_jobs or settings.N_JOBS

    active, skipped = resolve_metrics(dist, metrics)
    truth = GroundTruth.of(dist, np.linspace(0.0, 1.0, grid_points))

    LOGGER.info(
        f"Coverage run: {dist.describe()} n={n} alpha={level.alpha} K={partition.k} "
        f"trials={trials} seed={seed} metrics={active}"
    )
    outcomes = Parallel(n_jobs=n_jobs)(
        delayed(_run_trial)(dist, n, level, partition, truth, active, seed, t) for t in range(trials)
    )

    violations = {m: 0 for m in active}
    gap_sums: dict[str, list[float]] = {}
    for violated, gaps in outcomes:
        for metric, flag in violated.items():
            violations[metric] += int(flag)
        for name, value in gaps.items():
            gap_sums.setdefault(name, []).append(value)

    report = TrialReport(
        distribution=dist.describe(),
        trials=trials,
        n=n,
        alpha=level.alpha,
        k=partition.k,
        seed=seed,
        violations=violations,
        mean_bound_gap={name: math.fsum(values) / trials for name, values in gap_sums.items()},
        skipped=tuple(skipped),
        epsilon={
            Sidedness.ONE_SIDED.value: dkw_epsilon(n, level, Sidedness.ONE_SIDED),
            Sidedness.TWO_SIDED.value: dkw_epsilon(n, level, Sidedness.TWO_SIDED),
        },
    )
    for metric in active:
        rate = report.violation_rate(metric)
        log = LOGGER.info if rate <= report.tolerance else LOGGER.warning
        log(f"  {metric:<9} violations={violations[metric]}/{trials} ({rate:.4f}, tolerance {report.tolerance:.4f})")
    return report


def tightness_sweep(
    dist: KnownDistribution,
    n_grid: Sequence[int],
    k_grid: Sequence[int],
    alpha: SignificanceLevel | float,
    seed: int,
    *,
    trials: int = 20,
    n_jobs: int | None = None,
) -> pd.DataFrame:
    """Mean bound gaps over an (n, K) grid, one row per cell, ordered by n then K."""
    if not n_grid or not k_grid:
        raise DomainError("tightness_sweep needs non-empty n and K grids")

    rows = []
    for n in n_grid:
        for k in k_grid:
            report = run_coverage(
                dist,
                n,
                alpha,
                Partition.uniform(k),
                trials,
                seed,
                metrics=("gen", "mu", "sigma"),
                n_jobs=n_jobs,
            )
            rows.append(
                {
                    "n": n,
                    "k": k,
                    "epsilon_one_sided": report.epsilon[Sidedness.ONE_SIDED.value],
                    "epsilon_two_sided": report.epsilon[Sidedness.TWO_SIDED.value],
                    "gen_gap": report.mean_bound_gap["gen"],
                    "mu_gap": report.mean_bound_gap["mu"],
                    "mu_width": report.mean_bound_gap["mu_width"],
                    "sigma_gap": report.mean_bound_gap["sigma"],
                }
            )
    return pd.DataFrame(rows, columns=[
        "n", "k", "epsilon_one_sided", "epsilon_two_sided", "gen_gap", "mu_gap", "mu_width", "sigma_gap",
    ])


__all__ = [
    "METRICS",
    "GroundTruth",
    "TrialReport",
    "evaluate_trial",
    "resolve_metrics",
    "run_coverage",
    "tightness_sweep",
]
