from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from config.config import settings
from core.errors import DomainError
from core.types import SampleSet


@dataclass(frozen=True)
class EdConfig:
    rho: float = settings.RHO

    def __post_init__(self) -> None:
        if not (self.rho >= 0.0) or math.isinf(self.rho):
            raise DomainError(f"rho must be a finite non-negative number, got {self.rho}")


def sample_moments(samples: SampleSet) -> tuple[float, float]:
    """(mean, population standard deviation) of the scores."""
    values = samples.values
    mean = float(np.mean(values))
    sd = float(np.std(values, ddof=0))
    return mean, sd


def ed_score(samples: SampleSet, config: EdConfig | None = None) -> float:
    """S_mean + rho * S_sd. Not a bound: carries no guarantee and may exceed 1."""
    config = config or EdConfig()
    mean, sd = sample_moments(samples)
    if config.rho == 0.0:
        return mean
    return mean + config.rho * sd


__all__ = ["EdConfig", "sample_moments", "ed_score"]
