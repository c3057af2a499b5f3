"""
Exact violation probabilities for small discrete laws.

Every possible sample of size n is enumerated and weighted by its probability,
which replaces sampling noise by an exact number. Two enumerations are offered:
``product`` walks all |support|^n ordered outcomes, ``multinomial`` walks the
multisets once each with their multinomial weight. All bounds depend on the
sample only through its sorted values, so both must agree to rounding.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable

import numpy as np
from scipy.stats import multinomial

from config.config import settings
from core.errors import DomainError
from core.types import Partition, SampleSet, SignificanceLevel
from simulation.coverage import GroundTruth, evaluate_trial, resolve_metrics
from simulation.distributions import KnownDistribution

ENUMERATION_METHODS = ("product", "multinomial")
MAX_OUTCOMES = 1_000_000


def _product_outcomes(support: np.ndarray, weights: np.ndarray, n: int):
    for combo in itertools.product(range(support.size), repeat=n):
        idx = np.fromiter(combo, dtype=np.int64, count=n)
        yield support[idx], math.prod(weights[i] for i in combo)


def _multinomial_outcomes(support: np.ndarray, weights: np.ndarray, n: int):
    law = multinomial(n, weights)
    for combo in itertools.combinations_with_replacement(range(support.size), n):
        counts = np.bincount(np.fromiter(combo, dtype=np.int64, count=n), minlength=support.size)
        yield np.repeat(support, counts), float(law.pmf(counts))


def exact_violation_rates(
    dist: KnownDistribution,
    n: int,
    alpha: SignificanceLevel | float,
    partition: Partition,
    *,
    method: str = "multinomial",
    metrics: Iterable[str] | None = None,
    grid_points: int | None = None,
) -> dict[str, float]:
    """Probability, over a fresh sample of size n, that each bound misses the truth."""
    level = SignificanceLevel.of(alpha)
    if method not in ENUMERATION_METHODS:
        raise DomainError(f"Unknown enumeration method {method!r}; choose one of {ENUMERATION_METHODS}")
    atoms = dist.atoms()
    if atoms is None:
        raise DomainError(f"{dist.describe()} is not discrete; exact enumeration needs finite support")
    support, weights = atoms
    if n < 1 or support.size ** n > MAX_OUTCOMES:
        raise DomainError(f"Enumerating {support.size}^{n} outcomes is out of range")

    active, _ = resolve_metrics(dist, metrics)
    truth = GroundTruth.of(dist, np.linspace(0.0, 1.0, grid_points or settings.LEAKAGE_GRID_POINTS))
    outcomes = _product_outcomes if method == "product" else _multinomial_outcomes

    mass: dict[str, list[float]] = {m: [] for m in active}
    for values, probability in outcomes(support, weights, n):
        violated, _ = evaluate_trial(SampleSet(values), truth, level, partition, active)
        for metric, flag in violated.items():
            if flag:
                mass[metric].append(probability)
    return {metric: math.fsum(parts) for metric, parts in mass.items()}


__all__ = ["ENUMERATION_METHODS", "exact_violation_rates"]
