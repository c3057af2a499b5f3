from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

import numpy as np

from core.errors import DomainError

_WIDTH_SUM_TOL = 1e-12


class Sidedness(str, Enum):
    ONE_SIDED = "one-sided"
    TWO_SIDED = "two-sided"

    @classmethod
    def parse(cls, raw: "Sidedness | str | int") -> "Sidedness":
        if isinstance(raw, Sidedness):
            return raw
        if raw in (1, "1", "one", cls.ONE_SIDED.value):
            return cls.ONE_SIDED
        if raw in (2, "2", "two", cls.TWO_SIDED.value):
            return cls.TWO_SIDED
        raise DomainError(f"Unknown sidedness: {raw!r}")


@dataclass(frozen=True)
class SignificanceLevel:
    alpha: float

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha <= 0.5):
            raise DomainError(f"alpha must lie in (0, 0.5], got {self.alpha}")

    @classmethod
    def of(cls, alpha: "SignificanceLevel | float") -> "SignificanceLevel":
        return alpha if isinstance(alpha, SignificanceLevel) else cls(float(alpha))

    @property
    def confidence(self) -> float:
        return 1.0 - self.alpha


@dataclass(frozen=True, eq=False)
class SampleSet:
    """
    Scores X₁..Xₙ of one query, each in [0, 1].

    ``values`` keeps the input order (prefix subsampling relies on it);
    ``sorted_values`` is the ascending view every CDF computation uses.
    Both arrays are read-only.
    """

    values: np.ndarray
    sorted_values: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        if values.size == 0:
            raise DomainError("SampleSet needs at least one score")
        if not np.all(np.isfinite(values)):
            raise DomainError("SampleSet scores must be finite")
        if values.min() < 0.0 or values.max() > 1.0:
            raise DomainError(
                f"SampleSet scores must lie in [0, 1], got range [{values.min()}, {values.max()}]"
            )
        values.setflags(write=False)
        ordered = np.sort(values, kind="stable")
        ordered.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "sorted_values", ordered)

    @classmethod
    def from_scores(cls, scores: Iterable[float]) -> "SampleSet":
        return cls(np.fromiter((float(s) for s in scores), dtype=np.float64))

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def is_binary(self) -> bool:
        return bool(np.all((self.values == 0.0) | (self.values == 1.0)))

    @property
    def successes(self) -> int:
        return int(np.count_nonzero(self.values == 1.0))

    def prefix(self, size: int) -> "SampleSet":
        return SampleSet(self.values[:size])

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SampleSet):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash(self.values.tobytes())


@dataclass(frozen=True, eq=False)
class Partition:
    """Grid 0 = τ₀ ≤ … ≤ τ_K = 1 used by the moment bounds."""

    knots: np.ndarray

    def __post_init__(self) -> None:
        knots = np.array(self.knots, dtype=np.float64).reshape(-1)
        if knots.size < 2:
            raise DomainError("Partition needs at least two knots (K >= 1)")
        if knots[0] != 0.0 or knots[-1] != 1.0:
            raise DomainError(f"Partition must start at 0 and end at 1, got {knots[0]}..{knots[-1]}")
        if np.any(np.diff(knots) < 0.0):
            raise DomainError("Partition knots must be non-decreasing")
        if abs(float(np.diff(knots).sum()) - 1.0) > _WIDTH_SUM_TOL:
            raise DomainError("Partition widths must sum to 1")
        knots.setflags(write=False)
        object.__setattr__(self, "knots", knots)

    @classmethod
    def uniform(cls, k: int) -> "Partition":
        if k < 1:
            raise DomainError(f"Partition needs K >= 1 cells, got {k}")
        knots = np.linspace(0.0, 1.0, k + 1)
        knots[-1] = 1.0
        return cls(knots)

    @classmethod
    def sample_adapted(cls, samples: SampleSet) -> "Partition":
        """Knots at the sorted unique sample values plus {0, 1}."""
        knots = np.unique(np.concatenate(([0.0], samples.sorted_values, [1.0])))
        return cls(knots)

    @property
    def k(self) -> int:
        return int(self.knots.size - 1)

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.knots)

    def refine(self) -> "Partition":
        """Insert the midpoint of every cell (K -> 2K)."""
        mids = 0.5 * (self.knots[:-1] + self.knots[1:])
        merged = np.empty(self.knots.size + mids.size)
        merged[0::2] = self.knots
        merged[1::2] = mids
        return Partition(merged)

    def describe(self) -> dict:
        return {"k": self.k, "kind": "uniform" if self._is_uniform() else "custom"}

    def _is_uniform(self) -> bool:
        return bool(np.allclose(self.widths, 1.0 / self.k, rtol=0.0, atol=1e-12))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.knots, other.knots)

    def __hash__(self) -> int:
        return hash(self.knots.tobytes())


@dataclass(frozen=True, eq=False)
class EmpiricalCdf:
    """Right-continuous step function x ↦ #{Xᵢ ≤ x} / n."""

    support: np.ndarray

    @classmethod
    def of(cls, samples: SampleSet) -> "EmpiricalCdf":
        return cls(samples.sorted_values)

    @property
    def n(self) -> int:
        return int(self.support.size)

    def __call__(self, x: float | np.ndarray) -> float | np.ndarray:
        counts = np.searchsorted(self.support, x, side="right")
        result = counts / self.n
        return float(result) if np.ndim(result) == 0 else result


@dataclass(frozen=True, eq=False)
class CdfBand:
    base: EmpiricalCdf
    epsilon: float
    sidedness: Sidedness

    def __post_init__(self) -> None:
        if not (self.epsilon >= 0.0) or math.isinf(self.epsilon):
            raise DomainError(f"CdfBand epsilon must be finite and >= 0, got {self.epsilon}")

    def lower(self, x: float | np.ndarray) -> float | np.ndarray:
        result = np.clip(np.asarray(self.base(x)) - self.epsilon, 0.0, 1.0)
        return float(result) if np.ndim(result) == 0 else result

    def upper(self, x: float | np.ndarray) -> float | np.ndarray:
        result = np.clip(np.asarray(self.base(x)) + self.epsilon, 0.0, 1.0)
        return float(result) if np.ndim(result) == 0 else result


@dataclass(frozen=True)
class ExpectationBand:
    mu_lower: float
    mu_upper: float
    partition_used: Partition
    alpha: SignificanceLevel
    epsilon: float
    sidedness: Sidedness = Sidedness.TWO_SIDED

    def __post_init__(self) -> None:
        if not (0.0 <= self.mu_lower <= self.mu_upper <= 1.0):
            raise DomainError(
                f"ExpectationBand needs 0 <= mu_lower <= mu_upper <= 1, "
                f"got [{self.mu_lower}, {self.mu_upper}]"
            )

    @property
    def width(self) -> float:
        return self.mu_upper - self.mu_lower

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.mu_lower - slack <= value <= self.mu_upper + slack


@dataclass(frozen=True)
class BoundValue:
    """A bound never travels without its guarantee metadata."""

    value: float
    alpha: float
    n: int
    epsilon: float | None
    sidedness: Sidedness

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "alpha": self.alpha,
            "n": self.n,
            "epsilon": self.epsilon,
            "sidedness": self.sidedness.value,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "BoundValue":
        return cls(
            value=float(raw["value"]),
            alpha=float(raw["alpha"]),
            n=int(raw["n"]),
            epsilon=None if raw.get("epsilon") is None else float(raw["epsilon"]),
            sidedness=Sidedness.parse(raw["sidedness"]),
        )


__all__ = [
    "Sidedness",
    "SignificanceLevel",
    "SampleSet",
    "Partition",
    "EmpiricalCdf",
    "CdfBand",
    "ExpectationBand",
    "BoundValue",
]
