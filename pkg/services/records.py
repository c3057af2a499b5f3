from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable

from core.errors import IngestionError, ReportWriteError
from utils.logger import get_logger

LOGGER = get_logger(__name__)


class PayloadKind(str, Enum):
    SCORE = "score"
    REFERENCE = "reference"
    KEYWORDS = "keywords"


_PAYLOAD_FIELDS = {"score", "generation", "reference", "keywords"}
_KNOWN_FIELDS = _PAYLOAD_FIELDS | {"query_id", "greedy"}


@dataclass(frozen=True)
class EvaluationRecord:
    """One generation (or its precomputed score) for one query."""

    query_id: str
    score: float | None = None
    generation: str | None = None
    reference: str | None = None
    keywords: tuple[str, ...] | None = None
    greedy: bool = False
    line_no: int | None = field(default=None, compare=False, repr=False)

    @property
    def payload_kind(self) -> PayloadKind:
        if self.score is not None:
            return PayloadKind.SCORE
        if self.reference is not None:
            return PayloadKind.REFERENCE
        return PayloadKind.KEYWORDS

    @classmethod
    def from_dict(
        cls,
        raw: dict,
        *,
        path: Path | str | None = None,
        line_no: int | None = None,
    ) -> "EvaluationRecord":
        def fail(message: str) -> IngestionError:
            return IngestionError(message, path=path, line_no=line_no)

        if not isinstance(raw, dict):
            raise fail(f"expected a JSON object, got {type(raw).__name__}")

        unknown = set(raw) - _KNOWN_FIELDS
        if unknown:
            raise fail(f"unknown fields {sorted(unknown)}")

        query_id = raw.get("query_id")
        if not isinstance(query_id, str) or not query_id:
            raise fail("query_id must be a non-empty string")

        greedy = raw.get("greedy", False)
        if not isinstance(greedy, bool):
            raise fail("greedy must be true or false")

        present = {name for name in _PAYLOAD_FIELDS if raw.get(name) is not None}

        if present == {"score"}:
            score = raw["score"]
            if isinstance(score, bool) or not isinstance(score, (int, float)):
                raise fail(f"score must be a number, got {score!r}")
            score = float(score)
            if not math.isfinite(score) or not (0.0 <= score <= 1.0):
                raise fail(f"score {score} outside [0, 1]")
            return cls(query_id=query_id, score=score, greedy=greedy, line_no=line_no)

        if present == {"generation", "reference"}:
            generation, reference = raw["generation"], raw["reference"]
            if not isinstance(generation, str) or not isinstance(reference, str):
                raise fail("generation and reference must be strings")
            return cls(
                query_id=query_id,
                generation=generation,
                reference=reference,
                greedy=greedy,
                line_no=line_no,
            )

        if present == {"generation", "keywords"}:
            generation, keywords = raw["generation"], raw["keywords"]
            if not isinstance(generation, str):
                raise fail("generation must be a string")
            if not isinstance(keywords, list) or not all(isinstance(k, str) for k in keywords):
                raise fail("keywords must be a list of strings")
            if not keywords:
                raise fail("keywords must not be empty")
            return cls(
                query_id=query_id,
                generation=generation,
                keywords=tuple(keywords),
                greedy=greedy,
                line_no=line_no,
            )

        raise fail(
            "record needs exactly one payload: score | generation+reference | generation+keywords, "
            f"got fields {sorted(present)}"
        )

    def to_dict(self) -> dict:
        data: dict = {"query_id": self.query_id}
        if self.score is not None:
            data["score"] = self.score
        if self.generation is not None:
            data["generation"] = self.generation
        if self.reference is not None:
            data["reference"] = self.reference
        if self.keywords is not None:
            data["keywords"] = list(self.keywords)
        if self.greedy:
            data["greedy"] = True
        return data


def load_records(path: Path | str) -> list[EvaluationRecord]:
    path = Path(path)
    try:
        handle = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise IngestionError(f"cannot open input: {exc.strerror or exc}", path=path) from exc

    records: list[EvaluationRecord] = []
    with handle:
        try:
            for line_no, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    raw = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise IngestionError(f"invalid JSON: {exc.msg}", path=path, line_no=line_no) from exc
                records.append(EvaluationRecord.from_dict(raw, path=path, line_no=line_no))
        except UnicodeDecodeError as exc:
            raise IngestionError(f"input is not valid UTF-8: {exc.reason}", path=path) from exc

    if not records:
        raise IngestionError("no records found", path=path)

    LOGGER.info(f"Loaded {len(records)} records from {path}")
    return records


def dump_records(records: Iterable[EvaluationRecord], path: Path | str) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for record in records:
                f.write(json.dumps(record.to_dict(), ensure_ascii=False, sort_keys=True))
                f.write("\n")
    except OSError as exc:
        raise ReportWriteError(path, exc.strerror or str(exc)) from exc


def group_by_query(records: Iterable[EvaluationRecord]) -> dict[str, list[EvaluationRecord]]:
    """Records grouped by query_id, keys sorted, file order kept inside a group."""
    groups: dict[str, list[EvaluationRecord]] = {}
    for record in records:
        groups.setdefault(record.query_id, []).append(record)
    return {query_id: groups[query_id] for query_id in sorted(groups)}


__all__ = [
    "PayloadKind",
    "EvaluationRecord",
    "load_records",
    "dump_records",
    "group_by_query",
]
