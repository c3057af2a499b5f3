"""Configuration module for probe-bounds."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Any


@dataclass(frozen=True)
class Settings:
    """Evaluation defaults. Nothing is read from the environment; the CLI overrides fields explicitly."""

    ALPHA: float = 0.01
    N_SAMPLES: int = 1024
    PARTITION_K: int = 100
    RHO: float = 2.0

    TOP_P: float = 0.9
    CONFIDENCE_THRESHOLD: float = 0.9
    BASE_TEMPERATURE: float = 1.0

    HISTOGRAM_BINS: int = 50
    LEAKAGE_GRID_POINTS: int = 21
    AGGREGATE_FIELD: str = "mu_upper"
    AGGREGATE_THRESHOLD: float = 0.1
    REPORT_SCHEMA: str = "probe-bounds/1"
    CONVERGENCE_MIN_SIZE: int = 16

    N_JOBS: int = 1

    BETA_QUANTILE_TOL: float = 1e-12
    BETA_QUANTILE_MAX_ITER: int = 200
    BETA_CONTFRAC_MAX_ITER: int = 10_000

    BLEU_SMOOTHING: float = 1e-9
    BLEU_MAX_ORDER: int = 4

    LOG_LEVEL: str = "INFO"

    def override(self, **changes: Any) -> "Settings":
        """Return a copy with the non-None entries of ``changes`` applied."""
        known = {f.name for f in fields(self)}
        unknown = set(changes) - known
        if unknown:
            raise KeyError(f"Unknown settings: {sorted(unknown)}")
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def _build_settings() -> Settings:
    return Settings()


settings: Settings = _build_settings()

__all__ = ["settings", "Settings"]
