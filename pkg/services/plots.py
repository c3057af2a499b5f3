"""
Plot-ready tables for one query.

Nothing is rendered here: each function returns a pandas DataFrame that the
report store writes as CSV with a header row.
"""

from __future__ import annotations

import numpy as np
import pandas as pd

from config.config import settings
from core.bounds import cdf_band, dkw_epsilon, expectation_bounds, general_leakage_bound, std_dev_upper
from core.types import EmpiricalCdf, Partition, SampleSet, Sidedness, SignificanceLevel
from simulation.rng import stream


def histogram_table(samples: SampleSet, bins: int | None = None) -> pd.DataFrame:
    bins = bins or settings.HISTOGRAM_BINS
    counts, edges = np.histogram(samples.values, bins=bins, range=(0.0, 1.0))
    return pd.DataFrame(
        {
            "bin_left": edges[:-1],
            "bin_right": edges[1:],
            "count": counts.astype(np.int64),
            "fraction": counts / samples.n,
        }
    )


def cdf_table(samples: SampleSet, alpha: SignificanceLevel | float, partition: Partition) -> pd.DataFrame:
    """Empirical CDF and its two-sided band evaluated at the partition knots."""
    band = cdf_band(samples, alpha, Sidedness.TWO_SIDED)
    knots = partition.knots
    return pd.DataFrame(
        {
            "x": knots,
            "ecdf": EmpiricalCdf.of(samples)(knots),
            "lower": band.lower(knots),
            "upper": band.upper(knots),
        }
    )


def subsample_sizes(n: int, min_size: int | None = None) -> list[int]:
    size = min_size or settings.CONVERGENCE_MIN_SIZE
    sizes = []
    while size < n:
        sizes.append(size)
        size *= 2
    sizes.append(n)
    return sizes


def convergence_table(
    samples: SampleSet,
    alpha: SignificanceLevel | float,
    partition: Partition,
    seed: int,
) -> pd.DataFrame:
    """
    Bounds recomputed on growing prefixes of one seeded shuffle of the scores:
    sizes 16, 32, 64, ... and finally n.
    """
    level = SignificanceLevel.of(alpha)
    order = stream(seed).permutation(samples.n)
    shuffled = SampleSet(samples.values[order])

    rows = []
    for size in subsample_sizes(samples.n):
        prefix = shuffled.prefix(size)
        expectation = expectation_bounds(prefix, level, partition)
        rows.append(
            {
                "size": size,
                "epsilon_one_sided": dkw_epsilon(size, level, Sidedness.ONE_SIDED),
                "epsilon_two_sided": dkw_epsilon(size, level, Sidedness.TWO_SIDED),
                "s_mean": float(np.mean(prefix.values)),
                "mu_lower": expectation.mu_lower,
                "mu_upper": expectation.mu_upper,
                "sigma_upper": std_dev_upper(prefix, level, partition, expectation),
                "m_gen_median": general_leakage_bound(prefix, level, 0.5),
            }
        )
    return pd.DataFrame(rows)


__all__ = ["histogram_table", "cdf_table", "subsample_sizes", "convergence_table"]
