from __future__ import annotations

from typing import Iterable

from core.errors import DomainError
from scores.base import BaseScorer, ScoreResult
from services.records import EvaluationRecord, PayloadKind
from utils.logger import get_logger

LOGGER = get_logger(__name__)


def _normalize(text: str) -> str:
    return " ".join(text.split()).casefold()


def matched_keywords(answer: str, keywords: Iterable[str]) -> list[str]:
    keywords = list(keywords)
    if not keywords:
        raise DomainError("keyword_leak needs at least one keyword")

    haystack = _normalize(answer)
    matched = []
    for keyword in keywords:
        needle = _normalize(keyword)
        if not needle:
            raise DomainError(f"Blank keyword {keyword!r}")
        if needle in haystack:
            matched.append(keyword)
    return matched


def keyword_leak(answer: str, keywords: Iterable[str]) -> int:
    """1 if any keyword appears in the answer (case-insensitive substring), else 0."""
    return 1 if matched_keywords(answer, keywords) else 0


class KeywordScorer(BaseScorer):
    payload = PayloadKind.KEYWORDS

    def __init__(self):
        super().__init__("keyword")

    def score(self, record: EvaluationRecord) -> ScoreResult:
        matched = matched_keywords(record.generation or "", record.keywords or ())
        if matched:
            LOGGER.debug(f"[{record.query_id}] keyword hit: {matched}")
        return ScoreResult(
            scorer_name=self.name,
            score=1.0 if matched else 0.0,
            details={"matched_keywords": matched},
        )


__all__ = ["keyword_leak", "matched_keywords", "KeywordScorer"]
