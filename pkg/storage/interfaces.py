from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import pandas as pd

from core.types import BoundValue


@dataclass(slots=True)
class ExceedancePoint:
    x: float
    bound: BoundValue

    def to_dict(self) -> dict:
        return {"x": self.x, "bound": self.bound.to_dict()}

    @classmethod
    def from_dict(cls, raw: dict) -> "ExceedancePoint":
        return cls(x=float(raw["x"]), bound=BoundValue.from_dict(raw["bound"]))


@dataclass(slots=True)
class QueryReport:
    query_id: str
    n: int
    h: str
    s_mean: float
    s_sd: float
    ed: float
    mu_lower: BoundValue
    mu_upper: BoundValue
    sigma_upper: BoundValue
    m_gen: list[ExceedancePoint]
    epsilon: dict[str, float]
    partition: dict
    m_bin: BoundValue | None = None
    deterministic_score: float | None = None

    def bound(self, name: str) -> BoundValue | None:
        return {
            "m_bin": self.m_bin,
            "mu_lower": self.mu_lower,
            "mu_upper": self.mu_upper,
            "sigma_upper": self.sigma_upper,
        }.get(name)

    def to_dict(self) -> dict:
        return {
            "query_id": self.query_id,
            "n": self.n,
            "h": self.h,
            "s_mean": self.s_mean,
            "s_sd": self.s_sd,
            "ed": self.ed,
            "m_bin": self.m_bin.to_dict() if self.m_bin is not None else None,
            "m_gen": [point.to_dict() for point in self.m_gen],
            "mu_lower": self.mu_lower.to_dict(),
            "mu_upper": self.mu_upper.to_dict(),
            "sigma_upper": self.sigma_upper.to_dict(),
            "epsilon": dict(self.epsilon),
            "partition": dict(self.partition),
            "deterministic_score": self.deterministic_score,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "QueryReport":
        return cls(
            query_id=raw["query_id"],
            n=int(raw["n"]),
            h=raw["h"],
            s_mean=float(raw["s_mean"]),
            s_sd=float(raw["s_sd"]),
            ed=float(raw["ed"]),
            m_bin=BoundValue.from_dict(raw["m_bin"]) if raw.get("m_bin") is not None else None,
            m_gen=[ExceedancePoint.from_dict(p) for p in raw["m_gen"]],
            mu_lower=BoundValue.from_dict(raw["mu_lower"]),
            mu_upper=BoundValue.from_dict(raw["mu_upper"]),
            sigma_upper=BoundValue.from_dict(raw["sigma_upper"]),
            epsilon={k: float(v) for k, v in raw["epsilon"].items()},
            partition=dict(raw["partition"]),
            deterministic_score=raw.get("deterministic_score"),
        )


@dataclass(slots=True)
class AggregateResult:
    field: str
    threshold: float
    fraction: float

    def to_dict(self) -> dict:
        return {"field": self.field, "threshold": self.threshold, "fraction": self.fraction}


@dataclass(slots=True)
class MetricReport:
    schema: str
    settings: dict
    queries: list[QueryReport] = field(default_factory=list)
    aggregate: AggregateResult | None = None

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "settings": dict(self.settings),
            "queries": [q.to_dict() for q in self.queries],
            "aggregate": self.aggregate.to_dict() if self.aggregate is not None else None,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "MetricReport":
        aggregate = raw.get("aggregate")
        return cls(
            schema=raw["schema"],
            settings=dict(raw["settings"]),
            queries=[QueryReport.from_dict(q) for q in raw["queries"]],
            aggregate=AggregateResult(**aggregate) if aggregate is not None else None,
        )


class ReportStore(Protocol):
    @property
    def report_path(self) -> Path: ...

    def save_report(self, report: MetricReport) -> None: ...

    def load_report(self) -> MetricReport: ...

    def save_table(self, name: str, frame: pd.DataFrame) -> None: ...

    def save_document(self, name: str, document: dict) -> None: ...
