"""
Seeded random streams.

Every stream is a Philox (counter-based) generator keyed by a SeedSequence
whose spawn key is the trial index, so trial t draws the same numbers no
matter which worker runs it or in which order trials complete.
"""

from __future__ import annotations

import numpy as np

from core.errors import DomainError

GENERATOR_NAME = "numpy.random.Philox"

RngLike = np.random.Generator | int | None


def stream(seed: int, *key: int) -> np.random.Generator:
    if int(seed) < 0:
        raise DomainError(f"seed must be a non-negative integer, got {seed}")
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(sequence))


def trial_generator(seed: int, trial: int) -> np.random.Generator:
    return stream(seed, trial)


def as_generator(rng: RngLike) -> np.random.Generator:
    """Accept a caller-owned Generator or an integer seed; never falls back to global state."""
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        raise TypeError("An explicit Generator or integer seed is required")
    return stream(int(rng))


__all__ = ["GENERATOR_NAME", "RngLike", "stream", "trial_generator", "as_generator"]
