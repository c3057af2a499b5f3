from __future__ import annotations

from core.errors import UsageError
from scores.base import BaseScorer, ScoreResult
from scores.keyword import KeywordScorer
from scores.rouge import RougeLScorer
from services.records import EvaluationRecord, PayloadKind


class PrecomputedScorer(BaseScorer):
    """Identity h for records that already carry a score."""

    payload = PayloadKind.SCORE

    def __init__(self):
        super().__init__("score")

    def score(self, record: EvaluationRecord) -> ScoreResult:
        return ScoreResult(scorer_name=self.name, score=float(record.score))


_SCORERS: dict[str, type[BaseScorer]] = {
    "score": PrecomputedScorer,
    "rouge-l": RougeLScorer,
    "keyword": KeywordScorer,
}

SCORER_NAMES = tuple(_SCORERS)


def get_scorer(name: str) -> BaseScorer:
    try:
        return _SCORERS[name]()
    except KeyError:
        raise UsageError(f"Unknown h {name!r}; choose one of {', '.join(SCORER_NAMES)}") from None


__all__ = ["BaseScorer", "ScoreResult", "PrecomputedScorer", "SCORER_NAMES", "get_scorer"]
