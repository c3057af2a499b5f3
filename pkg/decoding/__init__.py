from decoding.policy import (
    effective_temperature,
    entropy_gradient,
    entropy_objective,
    sample_token,
    sample_tokens,
    sequence_confidence,
    sequence_entropy_loss,
    token_entropy,
    top_p_filter,
)
from decoding.types import DecodingPolicy, EntropyObjectiveConfig, SequenceDistribution, TokenDistribution

__all__ = [
    "TokenDistribution",
    "SequenceDistribution",
    "EntropyObjectiveConfig",
    "DecodingPolicy",
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
