from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import softmax

from config.config import settings
from core.errors import DomainError

_NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class TokenDistribution:
    """Next-token probabilities over a vocabulary of size |V|."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.array(self.probs, dtype=np.float64).reshape(-1)
        if probs.size == 0:
            raise DomainError("TokenDistribution needs a non-empty vocabulary")
        if not np.all(np.isfinite(probs)) or np.any(probs < 0.0):
            raise DomainError("TokenDistribution probabilities must be finite and non-negative")
        total = float(probs.sum())
        if abs(total - 1.0) > _NORMALIZATION_TOL:
            raise DomainError(f"TokenDistribution probabilities sum to {total!r}, expected 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_logits(cls, logits: Sequence[float] | np.ndarray) -> "TokenDistribution":
        logits = np.asarray(logits, dtype=np.float64).reshape(-1)
        if logits.size == 0 or not np.all(np.isfinite(logits)):
            raise DomainError("Logits must be a non-empty vector of finite numbers")
        return cls(softmax(logits))

    @property
    def vocab_size(self) -> int:
        return int(self.probs.size)


@dataclass(frozen=True, eq=False)
class SequenceDistribution:
    steps: tuple[TokenDistribution, ...]

    def __post_init__(self) -> None:
        steps = tuple(self.steps)
        if not steps:
            raise DomainError("SequenceDistribution needs at least one step")
        sizes = {step.vocab_size for step in steps}
        if len(sizes) != 1:
            raise DomainError(f"All steps must share one vocabulary size, got {sorted(sizes)}")
        object.__setattr__(self, "steps", steps)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "SequenceDistribution":
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2:
            raise DomainError(f"Expected an m x |V| matrix, got shape {matrix.shape}")
        return cls(tuple(TokenDistribution(row) for row in matrix))

    @property
    def m(self) -> int:
        return len(self.steps)

    @property
    def vocab_size(self) -> int:
        return self.steps[0].vocab_size

    @property
    def matrix(self) -> np.ndarray:
        return np.vstack([step.probs for step in self.steps])


@dataclass(frozen=True)
class EntropyObjectiveConfig:
    lambda_f: float
    lambda_r: float

    def __post_init__(self) -> None:
        if not (self.lambda_f > 0.0) or math.isinf(self.lambda_f):
            raise DomainError(f"lambda_f must be positive, got {self.lambda_f}")
        if not (self.lambda_r < 0.0) or math.isinf(self.lambda_r):
            raise DomainError(f"lambda_r must be negative, got {self.lambda_r}")


@dataclass(frozen=True)
class DecodingPolicy:
    base_temperature: float = settings.BASE_TEMPERATURE
    confidence_threshold: float = settings.CONFIDENCE_THRESHOLD
    top_p: float = settings.TOP_P

    def __post_init__(self) -> None:
        if not (self.base_temperature >= 0.0) or math.isinf(self.base_temperature):
            raise DomainError(f"base_temperature must be >= 0, got {self.base_temperature}")
        if not (0.0 <= self.confidence_threshold <= 1.0):
            raise DomainError(f"confidence_threshold must lie in [0, 1], got {self.confidence_threshold}")
        if not (0.0 < self.top_p <= 1.0):
            raise DomainError(f"top_p must lie in (0, 1], got {self.top_p}")


__all__ = [
    "TokenDistribution",
    "SequenceDistribution",
    "EntropyObjectiveConfig",
    "DecodingPolicy",
]
