"""
Distribution-free bounds on the leakage variable X = h(Y) ∈ [0, 1].

M_bin   clopper_pearson_upper     one-sided Clopper-Pearson bound on Pr(X = 1)
M_gen   general_leakage_bound     DKW bound on Pr(X > x), simultaneously in x
M_mu    expectation_bounds        Riemann sums of the CDF band
M_sigma std_dev_upper             cell-wise worst-case deviation times band mass

The moment bounds share one two-sided CDF band so that the expectation and the
standard deviation guarantees hold jointly at level 1 - alpha.
"""

from __future__ import annotations

import math
import numbers
from functools import lru_cache

import numpy as np

from core.errors import DomainError
from core.special import betaincinv
from core.types import (
    CdfBand,
    EmpiricalCdf,
    ExpectationBand,
    Partition,
    SampleSet,
    Sidedness,
    SignificanceLevel,
)
from utils.logger import get_logger

LOGGER = get_logger(__name__)

AlphaLike = SignificanceLevel | float


def _as_count(value, name: str) -> int:
    if isinstance(value, bool):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise DomainError(f"{name} must be an integer, got {value!r}")


def _check_counts(successes: int, n: int) -> None:
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if successes < 0 or successes > n:
        raise DomainError(f"successes must lie in [0, n={n}], got {successes}")


@lru_cache(maxsize=4096)
def _cp_upper_cached(successes: int, n: int, alpha: float) -> float:
    if successes == n:
        return 1.0
    return float(betaincinv(successes + 1, n - successes, 1.0 - alpha))


def clopper_pearson_upper(successes: int, n: int, alpha: AlphaLike) -> float:
    """One-sided upper bound on a Bernoulli p spending the full alpha."""
    level = SignificanceLevel.of(alpha)
    successes, n = _as_count(successes, "successes"), _as_count(n, "n")
    _check_counts(successes, n)
    return _cp_upper_cached(successes, n, level.alpha)


def clopper_pearson_interval(successes: int, n: int, alpha: AlphaLike) -> tuple[float, float]:
    """Two-sided Clopper-Pearson interval, alpha / 2 in each tail."""
    level = SignificanceLevel.of(alpha)
    successes, n = _as_count(successes, "successes"), _as_count(n, "n")
    _check_counts(successes, n)
    half = level.alpha / 2.0
    lower = 0.0 if successes == 0 else float(betaincinv(successes, n - successes + 1, half))
    upper = _cp_upper_cached(successes, n, half)
    return lower, upper


def dkw_epsilon(n: int, alpha: AlphaLike, sidedness: Sidedness | str = Sidedness.ONE_SIDED) -> float:
    level = SignificanceLevel.of(alpha)
    n = _as_count(n, "n")
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    side = Sidedness.parse(sidedness)
    numerator = math.log(1.0 / level.alpha) if side is Sidedness.ONE_SIDED else math.log(2.0 / level.alpha)
    return math.sqrt(numerator / (2.0 * n))


def cdf_band(
    samples: SampleSet,
    alpha: AlphaLike,
    sidedness: Sidedness | str = Sidedness.TWO_SIDED,
    *,
    epsilon: float | None = None,
) -> CdfBand:
    side = Sidedness.parse(sidedness)
    eps = dkw_epsilon(samples.n, alpha, side) if epsilon is None else float(epsilon)
    return CdfBand(base=EmpiricalCdf.of(samples), epsilon=eps, sidedness=side)


def _check_threshold(x: float | np.ndarray) -> np.ndarray:
    xa = np.asarray(x, dtype=np.float64)
    if np.any(np.isnan(xa)) or np.any(xa < 0.0) or np.any(xa > 1.0):
        raise DomainError(f"Leakage threshold must lie in [0, 1], got {x}")
    return xa


def general_leakage_bound(samples: SampleSet, alpha: AlphaLike, x: float) -> float:
    """min(1, 1 - Fₙ(x) + ε₁): upper bound on Pr(X > x) for every x at once."""
    _check_threshold(x)
    eps = dkw_epsilon(samples.n, alpha, Sidedness.ONE_SIDED)
    return min(1.0, 1.0 - EmpiricalCdf.of(samples)(float(x)) + eps)


def leakage_curve(samples: SampleSet, alpha: AlphaLike, grid: np.ndarray) -> np.ndarray:
    grid = _check_threshold(grid)
    eps = dkw_epsilon(samples.n, alpha, Sidedness.ONE_SIDED)
    return np.minimum(1.0, 1.0 - EmpiricalCdf.of(samples)(grid) + eps)


def exceedance_band(samples: SampleSet, alpha: AlphaLike, x: float) -> tuple[float, float]:
    """Simultaneous two-sided interval on Pr(X > x)."""
    _check_threshold(x)
    eps = dkw_epsilon(samples.n, alpha, Sidedness.TWO_SIDED)
    tail = 1.0 - EmpiricalCdf.of(samples)(float(x))
    return max(0.0, tail - eps), min(1.0, tail + eps)


def expectation_bounds(
    samples: SampleSet,
    alpha: AlphaLike,
    partition: Partition,
    *,
    epsilon: float | None = None,
) -> ExpectationBand:
    level = SignificanceLevel.of(alpha)
    if not isinstance(partition, Partition):
        raise DomainError(f"expectation_bounds needs a Partition, got {type(partition).__name__}")
    band = cdf_band(samples, level, Sidedness.TWO_SIDED, epsilon=epsilon)

    knots = partition.knots
    widths = partition.widths
    lower_env = band.lower(knots)
    upper_env = band.upper(knots)

    # 1 - Σ δ·F = Σ δ·(1 - F) because Σ δ = 1; the right-hand form is exact at F = 1.
    mu_upper = float(np.sum(widths * (1.0 - lower_env[:-1])))
    mu_lower = float(np.sum(widths * (1.0 - upper_env[1:])))
    mu_upper = min(1.0, max(0.0, mu_upper))
    mu_lower = min(mu_upper, max(0.0, mu_lower))

    LOGGER.debug(
        f"expectation band n={samples.n} K={partition.k} eps={band.epsilon:.6f}: "
        f"[{mu_lower:.6f}, {mu_upper:.6f}]"
    )
    return ExpectationBand(
        mu_lower=mu_lower,
        mu_upper=mu_upper,
        partition_used=partition,
        alpha=level,
        epsilon=band.epsilon,
        sidedness=Sidedness.TWO_SIDED,
    )


def _eta(knots: np.ndarray, mu_lower: float, mu_upper: float) -> np.ndarray:
    left = knots[:-1]
    right = knots[1:]
    candidates = np.stack(
        [
            (left - mu_lower) ** 2,
            (left - mu_upper) ** 2,
            (right - mu_lower) ** 2,
            (right - mu_upper) ** 2,
        ]
    )
    return candidates.max(axis=0)


def std_dev_upper(
    samples: SampleSet,
    alpha: AlphaLike,
    partition: Partition,
    band: ExpectationBand,
    *,
    epsilon: float | None = None,
) -> float:
    level = SignificanceLevel.of(alpha)
    if band.partition_used != partition:
        raise DomainError("ExpectationBand was computed on a different partition")
    if band.alpha != level:
        raise DomainError(f"ExpectationBand alpha {band.alpha.alpha} differs from {level.alpha}")
    if band.sidedness is not Sidedness.TWO_SIDED:
        raise DomainError("std_dev_upper needs a two-sided expectation band")
    if epsilon is not None and not math.isclose(float(epsilon), band.epsilon, rel_tol=0.0, abs_tol=1e-15):
        raise DomainError(f"epsilon {epsilon} differs from the band's {band.epsilon}")

    cdf = cdf_band(samples, level, Sidedness.TWO_SIDED, epsilon=band.epsilon)
    knots = partition.knots
    eta = _eta(knots, band.mu_lower, band.mu_upper)
    lower_env = cdf.lower(knots)
    upper_env = cdf.upper(knots)

    # F̲ at τ₀ is taken from the left (X >= 0, so it is 0): the first cell is
    # closed at 0 and an atom at 0 stays inside η₀'s mass.
    lower_at_origin = cdf.lower(np.nextafter(knots[0], -np.inf))
    variance = eta[-1] - eta[0] * lower_at_origin
    if partition.k > 1:
        d = eta[:-1] - eta[1:]
        inner_upper = upper_env[1:-1]
        inner_lower = lower_env[1:-1]
        variance += float(np.sum(d * np.where(d >= 0.0, inner_upper, inner_lower)))

    variance = max(0.0, float(variance))
    return math.sqrt(variance)


def sample_size_for(epsilon: float, alpha: AlphaLike, sidedness: Sidedness | str = Sidedness.ONE_SIDED) -> int:
    """
    Smallest n with dkw_epsilon(n) <= epsilon.

    Inverts ε = sqrt(ln(c/α) / 2n) with c = 1 (one-sided) or 2 (two-sided),
    then nudges n by one in either direction to absorb rounding in the ceiling.
    """
    level = SignificanceLevel.of(alpha)
    side = Sidedness.parse(sidedness)
    if not (epsilon > 0.0) or math.isinf(epsilon):
        raise DomainError(f"epsilon must be a positive finite number, got {epsilon}")

    numerator = math.log(1.0 / level.alpha) if side is Sidedness.ONE_SIDED else math.log(2.0 / level.alpha)
    n = max(1, math.ceil(numerator / (2.0 * epsilon * epsilon)))
    while dkw_epsilon(n, level, side) > epsilon:
        n += 1
    while n > 1 and dkw_epsilon(n - 1, level, side) <= epsilon:
        n -= 1
    return n


__all__ = [
    "clopper_pearson_upper",
    "clopper_pearson_interval",
    "dkw_epsilon",
    "cdf_band",
    "general_leakage_bound",
    "leakage_curve",
    "exceedance_band",
    "expectation_bounds",
    "std_dev_upper",
    "sample_size_for",
]
