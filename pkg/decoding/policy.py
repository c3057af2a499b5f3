"""
Decoding-side computations over supplied token probabilities.

Entropies are in nats. Zero-probability terms contribute 0 (scipy's entr /
xlogy use the 0·log 0 = 0 limit).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.special import entr, softmax, xlogy

from core.errors import DomainError
from decoding.types import (
    DecodingPolicy,
    EntropyObjectiveConfig,
    SequenceDistribution,
    TokenDistribution,
)
from simulation.rng import RngLike, as_generator


def token_entropy(dist: TokenDistribution) -> float:
    return max(0.0, float(np.sum(entr(dist.probs))))


def sequence_entropy_loss(seq: SequenceDistribution) -> float:
    """Per-token entropy averaged over the m steps of a sequence."""
    return float(np.mean([token_entropy(step) for step in seq.steps]))


def entropy_gradient(logits: Sequence[float] | np.ndarray) -> np.ndarray:
    """∂H(softmax(z))/∂z_j = -q_j (log q_j + H)."""
    logits = np.asarray(logits, dtype=np.float64).reshape(-1)
    if logits.size == 0 or not np.all(np.isfinite(logits)):
        raise DomainError("entropy_gradient needs a non-empty vector of finite logits")
    q = softmax(logits)
    entropy = float(np.sum(entr(q)))
    return -(xlogy(q, q) + q * entropy)


def _batch_mean(losses: Sequence[float]) -> float:
    losses = np.asarray(list(losses), dtype=np.float64)
    return float(losses.mean()) if losses.size else 0.0


def entropy_objective(
    unlearn_loss_value: float,
    forget_losses: Sequence[float],
    retain_losses: Sequence[float],
    config: EntropyObjectiveConfig,
) -> float:
    """L_UL + λ_f·mean(forget ℓ) + λ_r·mean(retain ℓ); an empty batch contributes 0."""
    return (
        float(unlearn_loss_value)
        + config.lambda_f * _batch_mean(forget_losses)
        + config.lambda_r * _batch_mean(retain_losses)
    )


def sequence_confidence(seq: SequenceDistribution) -> float:
    """Mean over steps of the most likely token's probability."""
    return float(np.mean(seq.matrix.max(axis=1)))


def effective_temperature(confidence: float, policy: DecodingPolicy) -> float:
    # strictly above the threshold switches to greedy
    return 0.0 if confidence > policy.confidence_threshold else policy.base_temperature


def top_p_filter(probs: np.ndarray, top_p: float) -> np.ndarray:
    """
    Zero out everything outside the nucleus and renormalize.

    Tokens are ranked by descending probability (stable, so lower indices win
    ties) and the smallest prefix whose cumulative mass reaches ``top_p`` is
    kept, including the token that crosses it.
    """
    if not (0.0 < top_p <= 1.0):
        raise DomainError(f"top_p must lie in (0, 1], got {top_p}")
    probs = np.asarray(probs, dtype=np.float64)
    order = np.argsort(-probs, kind="stable")
    cumulative = np.cumsum(probs[order])
    keep = min(int(np.searchsorted(cumulative, top_p, side="left")) + 1, probs.size)

    filtered = np.zeros_like(probs)
    kept = order[:keep]
    filtered[kept] = probs[kept] / probs[kept].sum()
    return filtered


def _tempered(dist: TokenDistribution, temperature: float) -> np.ndarray:
    with np.errstate(divide="ignore"):
        logits = np.log(dist.probs)
    return softmax(logits / temperature)


def sample_tokens(
    dist: TokenDistribution,
    temperature: float,
    top_p: float,
    rng: RngLike,
    size: int,
) -> np.ndarray:
    if temperature < 0.0:
        raise DomainError(f"temperature must be >= 0, got {temperature}")
    if temperature == 0.0:
        return np.full(size, int(np.argmax(dist.probs)), dtype=np.int64)
    nucleus = top_p_filter(_tempered(dist, temperature), top_p)
    return as_generator(rng).choice(dist.vocab_size, size=size, p=nucleus).astype(np.int64)


def sample_token(dist: TokenDistribution, temperature: float, top_p: float, rng: RngLike) -> int:
    """One draw; temperature 0 is argmax with the lowest index on ties."""
    return int(sample_tokens(dist, temperature, top_p, rng, 1)[0])


__all__ = [
    "token_entropy",
    "sequence_entropy_loss",
    "entropy_gradient",
    "entropy_objective",
    "sequence_confidence",
    "effective_temperature",
    "top_p_filter",
    "sample_tokens",
    "sample_token",
]
