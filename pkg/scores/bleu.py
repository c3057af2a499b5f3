"""
Self-BLEU diversity: every generation is scored against all the others as
references and the mean BLEU is subtracted from 1.

Modified n-gram precision, the brevity penalty and the closest reference
length come from nltk; smoothing is a plain additive epsilon on zero clipped
counts so that a single missing order does not zero the geometric mean.
"""

from __future__ import annotations

import math
from typing import Sequence

from nltk.translate.bleu_score import brevity_penalty, closest_ref_length, modified_precision

from config.config import settings
from core.errors import DomainError
from scores.tokenize import TokenSequence


def sentence_bleu(
    hypothesis: Sequence[str],
    references: Sequence[Sequence[str]],
    *,
    max_order: int | None = None,
    smoothing: float | None = None,
) -> float:
    max_order = settings.BLEU_MAX_ORDER if max_order is None else max_order
    smoothing = settings.BLEU_SMOOTHING if smoothing is None else smoothing
    hypothesis = list(hypothesis)
    references = [list(ref) for ref in references]

    if not hypothesis:
        return 1.0 if any(not ref for ref in references) else 0.0

    orders = min(max_order, len(hypothesis))
    log_sum = 0.0
    for order in range(1, orders + 1):
        denominator = max(1, len(hypothesis) - order + 1)
        precision = float(modified_precision(references, hypothesis, order))
        clipped = round(precision * denominator)
        numerator = clipped if clipped > 0 else smoothing
        log_sum += math.log(numerator / denominator)

    hyp_len = len(hypothesis)
    penalty = brevity_penalty(closest_ref_length(references, hyp_len), hyp_len)
    return penalty * math.exp(log_sum / orders)


def self_bleu_diversity(
    generations: Sequence[TokenSequence | str],
    *,
    max_order: int | None = None,
    smoothing: float | None = None,
) -> float:
    if len(generations) < 2:
        raise DomainError(f"self-BLEU needs at least 2 generations, got {len(generations)}")

    sequences = [TokenSequence.of(g).tokens for g in generations]
    scores = []
    for i, hypothesis in enumerate(sequences):
        references = sequences[:i] + sequences[i + 1:]
        scores.append(sentence_bleu(hypothesis, references, max_order=max_order, smoothing=smoothing))

    diversity = 1.0 - math.fsum(scores) / len(scores)
    return min(1.0, max(0.0, diversity))


__all__ = ["sentence_bleu", "self_bleu_diversity"]
