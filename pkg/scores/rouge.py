from __future__ import annotations

from typing import Sequence

from scores.base import BaseScorer, ScoreResult
from scores.tokenize import TokenSequence
from services.records import EvaluationRecord, PayloadKind


def lcs_length(first: Sequence[str], second: Sequence[str]) -> int:
    """Longest common subsequence length, O(len(first) * len(second)) with one rolling row."""
    if len(first) < len(second):
        first, second = second, first
    if not second:
        return 0

    previous = [0] * (len(second) + 1)
    for token in first:
        current = [0] * (len(second) + 1)
        for j, other in enumerate(second, start=1):
            if token == other:
                current[j] = previous[j - 1] + 1
            else:
                current[j] = max(previous[j], current[j - 1])
        previous = current
    return previous[-1]


def rouge_l(candidate: TokenSequence, reference: TokenSequence) -> float:
    """ROUGE-L F1 (beta = 1) between two token sequences."""
    candidate = TokenSequence.of(candidate)
    reference = TokenSequence.of(reference)
    if not candidate.tokens or not reference.tokens:
        return 0.0

    lcs = lcs_length(candidate.tokens, reference.tokens)
    if lcs == 0:
        return 0.0
    precision = lcs / len(candidate.tokens)
    recall = lcs / len(reference.tokens)
    return 2.0 * precision * recall / (precision + recall)


class RougeLScorer(BaseScorer):
    payload = PayloadKind.REFERENCE

    def __init__(self):
        super().__init__("rouge-l")

    def score(self, record: EvaluationRecord) -> ScoreResult:
        candidate = TokenSequence.from_text(record.generation or "")
        reference = TokenSequence.from_text(record.reference or "")
        return ScoreResult(
            scorer_name=self.name,
            score=rouge_l(candidate, reference),
            details={"candidate_tokens": len(candidate), "reference_tokens": len(reference)},
        )


__all__ = ["lcs_length", "rouge_l", "RougeLScorer"]
