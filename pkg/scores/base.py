from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

from services.records import EvaluationRecord, PayloadKind


@dataclass(frozen=True)
class ScoreResult:
    scorer_name: str
    score: float
    details: dict[str, Any] | None = None


class BaseScorer(ABC):
    """Leakage measure h: one record in, one score in [0, 1] out."""

    payload: PayloadKind

    def __init__(self, name: str):
        self.name = name

    @abstractmethod
    def score(self, record: EvaluationRecord) -> ScoreResult:
        pass
