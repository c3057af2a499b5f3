"""
Score distributions on [0, 1] with closed-form CDF and moments.

They stand in for the unobservable output law of a model: the coverage
harness samples from them and checks every bound against the analytic truth.
"""

from __future__ import annotations

import math
import re
from abc import ABC, abstractmethod
from typing import Sequence

import numpy as np

from core.errors import DomainError, UsageError
from core.special import betainc, betaincinv

_WEIGHT_TOL = 1e-9


def _fmt(value: float) -> str:
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


class KnownDistribution(ABC):
    kind: str

    @abstractmethod
    def cdf(self, x: float | np.ndarray) -> float | np.ndarray:
        pass

    @property
    @abstractmethod
    def mean(self) -> float:
        pass

    @property
    @abstractmethod
    def variance(self) -> float:
        pass

    @property
    def sd(self) -> float:
        return math.sqrt(max(0.0, self.variance))

    @abstractmethod
    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        pass

    def atoms(self) -> tuple[np.ndarray, np.ndarray] | None:
        """(support, weights) for purely discrete laws, None otherwise."""
        return None

    @property
    def is_binary(self) -> bool:
        atoms = self.atoms()
        return atoms is not None and bool(np.all((atoms[0] == 0.0) | (atoms[0] == 1.0)))

    def exceedance(self, x: float | np.ndarray) -> float | np.ndarray:
        """Pr(X > x)."""
        return 1.0 - self.cdf(x)

    @abstractmethod
    def describe(self) -> str:
        pass

    def __repr__(self) -> str:
        return self.describe()


class Discrete(KnownDistribution):
    kind = "discrete"

    def __init__(self, support: Sequence[float], weights: Sequence[float]):
        support = np.asarray(support, dtype=np.float64).reshape(-1)
        weights = np.asarray(weights, dtype=np.float64).reshape(-1)
        if support.size == 0 or support.size != weights.size:
            raise DomainError("discrete distribution needs matching, non-empty support and weights")
        if not np.all(np.isfinite(support)) or support.min() < 0.0 or support.max() > 1.0:
            raise DomainError("discrete support must lie in [0, 1]")
        if np.any(weights < 0.0) or abs(float(weights.sum()) - 1.0) > _WEIGHT_TOL:
            raise DomainError(f"discrete weights must be non-negative and sum to 1, got {weights.sum()!r}")

        values, inverse = np.unique(support, return_inverse=True)
        merged = np.zeros(values.size)
        np.add.at(merged, inverse, weights)
        positive = merged > 0.0
        self.support = values[positive]
        self.weights = merged[positive] / merged[positive].sum()
        self._cumulative = np.cumsum(self.weights)
        self._cumulative[-1] = 1.0

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        idx = np.searchsorted(self.support, x, side="right")
        padded = np.concatenate(([0.0], self._cumulative))
        result = padded[idx]
        return float(result) if result.ndim == 0 else result

    @property
    def mean(self) -> float:
        return float(np.dot(self.support, self.weights))

    @property
    def variance(self) -> float:
        return float(np.dot(self.weights, (self.support - self.mean) ** 2))

    def sample(self, rng, n):
        idx = np.searchsorted(self._cumulative, rng.random(n), side="right")
        return self.support[np.minimum(idx, self.support.size - 1)]

    def atoms(self):
        return self.support.copy(), self.weights.copy()

    def describe(self) -> str:
        pairs = ",".join(f"{_fmt(v)}:{_fmt(w)}" for v, w in zip(self.support, self.weights))
        return f"discrete({pairs})"


class Bernoulli(Discrete):
    kind = "bernoulli"

    def __init__(self, p: float):
        if not (0.0 <= p <= 1.0):
            raise DomainError(f"bernoulli p must lie in [0, 1], got {p}")
        self.p = float(p)
        super().__init__([0.0, 1.0], [1.0 - self.p, self.p])

    @property
    def mean(self) -> float:
        return self.p

    @property
    def variance(self) -> float:
        return self.p * (1.0 - self.p)

    def sample(self, rng, n):
        return (rng.random(n) < self.p).astype(np.float64)

    def describe(self) -> str:
        return f"bernoulli({_fmt(self.p)})"


class PointMass(Discrete):
    kind = "point_mass"

    def __init__(self, value: float):
        if not (0.0 <= value <= 1.0):
            raise DomainError(f"point mass must lie in [0, 1], got {value}")
        self.value = float(value)
        super().__init__([self.value], [1.0])

    @property
    def mean(self) -> float:
        return self.value

    @property
    def variance(self) -> float:
        return 0.0

    def sample(self, rng, n):
        return np.full(n, self.value)

    def describe(self) -> str:
        return f"point({_fmt(self.value)})"


class BetaDist(KnownDistribution):
    """Beta(a, b); sampling inverts the regularized incomplete beta."""

    kind = "beta"

    def __init__(self, a: float, b: float):
        if not (a > 0.0 and b > 0.0) or math.isinf(a) or math.isinf(b):
            raise DomainError(f"beta shapes must be finite and positive, got a={a}, b={b}")
        self.a = float(a)
        self.b = float(b)

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0)
        return betainc(self.a, self.b, x)

    @property
    def mean(self) -> float:
        return self.a / (self.a + self.b)

    @property
    def variance(self) -> float:
        total = self.a + self.b
        return self.a * self.b / (total * total * (total + 1.0))

    def sample(self, rng, n):
        return np.atleast_1d(betaincinv(self.a, self.b, rng.random(n)))

    def describe(self) -> str:
        return f"beta({_fmt(self.a)},{_fmt(self.b)})"


class Mixture(KnownDistribution):
    kind = "mixture"

    def __init__(self, components: Sequence[KnownDistribution], weights: Sequence[float]):
        weights = np.asarray(weights, dtype=np.float64).reshape(-1)
        if len(components) == 0 or len(components) != weights.size:
            raise DomainError("mixture needs matching, non-empty components and weights")
        if np.any(weights < 0.0) or abs(float(weights.sum()) - 1.0) > _WEIGHT_TOL:
            raise DomainError(f"mixture weights must be non-negative and sum to 1, got {weights.sum()!r}")
        self.components = tuple(components)
        self.weights = weights / weights.sum()

    def cdf(self, x):
        result = sum(w * np.asarray(c.cdf(x)) for c, w in zip(self.components, self.weights))
        result = np.clip(result, 0.0, 1.0)
        return float(result) if np.ndim(result) == 0 else result

    @property
    def mean(self) -> float:
        return float(sum(w * c.mean for c, w in zip(self.components, self.weights)))

    @property
    def variance(self) -> float:
        second = sum(w * (c.variance + c.mean ** 2) for c, w in zip(self.components, self.weights))
        return float(second - self.mean ** 2)

    def sample(self, rng, n):
        labels = np.searchsorted(np.cumsum(self.weights), rng.random(n), side="right")
        labels = np.minimum(labels, len(self.components) - 1)
        values = np.empty(n)
        for index, component in enumerate(self.components):
            slots = np.flatnonzero(labels == index)
            if slots.size:
                values[slots] = component.sample(rng, slots.size)
        return values

    def atoms(self):
        parts = [c.atoms() for c in self.components]
        if any(part is None for part in parts):
            return None
        support = np.concatenate([p[0] for p in parts])
        weights = np.concatenate([p[1] * w for p, w in zip(parts, self.weights)])
        merged = Discrete(support, weights / weights.sum())
        return merged.support, merged.weights

    def describe(self) -> str:
        return " + ".join(f"{_fmt(w)}*{c.describe()}" for c, w in zip(self.components, self.weights))


_CALL_RE = re.compile(r"^\s*([a-z_]+)\s*\((.*)\)\s*$")


def _split_top_level(text: str, separator: str) -> list[str]:
    parts, depth, current = [], 0, []
    for char in text:
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
        if char == separator and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(char)
    parts.append("".join(current))
    return parts


def _number(raw: str, spec: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"Cannot parse number {raw.strip()!r} in distribution {spec!r}") from None


def _parse_single(spec: str) -> KnownDistribution:
    match = _CALL_RE.match(spec)
    if match is None:
        raise UsageError(f"Malformed distribution {spec!r}")
    name, body = match.group(1), match.group(2)
    args = [a for a in (part.strip() for part in body.split(",")) if a]

    try:
        if name == "bernoulli" and len(args) == 1:
            return Bernoulli(_number(args[0], spec))
        if name == "beta" and len(args) == 2:
            return BetaDist(_number(args[0], spec), _number(args[1], spec))
        if name in ("point", "point_mass") and len(args) == 1:
            return PointMass(_number(args[0], spec))
        if name == "discrete" and args:
            pairs = [arg.split(":") for arg in args]
            if any(len(pair) != 2 for pair in pairs):
                raise UsageError(f"discrete expects value:weight pairs, got {spec!r}")
            return Discrete([_number(v, spec) for v, _ in pairs], [_number(w, spec) for _, w in pairs])
    except DomainError as exc:
        raise UsageError(f"Invalid distribution {spec!r}: {exc}") from exc

    raise UsageError(f"Unknown distribution or wrong arity: {spec!r}")


def parse_distribution(spec: str) -> KnownDistribution:
    """
    Parse ``bernoulli(p)``, ``beta(a,b)``, ``point(v)``,
    ``discrete(v:w,...)`` or a mixture ``w*spec + w*spec``.
    """
    terms = [term.strip() for term in _split_top_level(spec, "+")]
    weighted = [_split_top_level(term, "*") for term in terms]

    if len(terms) == 1 and len(weighted[0]) == 1:
        return _parse_single(terms[0])

    components, weights = [], []
    for term, pieces in zip(terms, weighted):
        if len(pieces) != 2:
            raise UsageError(f"Mixture terms must look like w*spec, got {term!r}")
        weights.append(_number(pieces[0], spec))
        components.append(_parse_single(pieces[1]))
    try:
        return Mixture(components, weights)
    except DomainError as exc:
        raise UsageError(f"Invalid mixture {spec!r}: {exc}") from exc


__all__ = [
    "KnownDistribution",
    "Discrete",
    "Bernoulli",
    "PointMass",
    "BetaDist",
    "Mixture",
    "parse_distribution",
]
