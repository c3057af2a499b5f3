from simulation.coverage import METRICS, TrialReport, run_coverage, tightness_sweep
from simulation.distributions import KnownDistribution, parse_distribution
from simulation.enumeration import exact_violation_rates

__all__ = [
    "METRICS",
    "TrialReport",
    "run_coverage",
    "tightness_sweep",
    "KnownDistribution",
    "parse_distribution",
    "exact_violation_rates",
]
