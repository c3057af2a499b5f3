from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from core.errors import DomainError, IngestionError, ReportWriteError
from decoding.types import SequenceDistribution, TokenDistribution
from utils.logger import get_logger

LOGGER = get_logger(__name__)

MATRIX_SCHEMA = "probe-matrix/1"
_HEADER_RE = re.compile(r"^#\s*probe-matrix/1\s+vocab=(\d+)\s+steps=(\d+)\s*$")


def write_matrix(seq: SequenceDistribution, path: Path | str) -> None:
    path = Path(path)
    header = f"{MATRIX_SCHEMA} vocab={seq.vocab_size} steps={seq.m}"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, seq.matrix, fmt="%.17g", header=header, comments="# ")
    except OSError as exc:
        raise ReportWriteError(path, exc.strerror or str(exc)) from exc


def read_matrix(path: Path | str) -> SequenceDistribution:
    path = Path(path)
    try:
        handle = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise IngestionError(f"cannot open matrix: {exc.strerror or exc}", path=path) from exc

    rows: list[TokenDistribution] = []
    with handle:
        match = _HEADER_RE.match(handle.readline().rstrip("\n"))
        if match is None:
            raise IngestionError(f"expected header '# {MATRIX_SCHEMA} vocab=<V> steps=<m>'", path=path, line_no=1)
        vocab, steps = int(match.group(1)), int(match.group(2))
        if vocab < 1 or steps < 1:
            raise IngestionError(f"header declares an empty {steps}x{vocab} matrix", path=path, line_no=1)

        for line_no, line in enumerate(handle, start=2):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            try:
                values = np.array(body.split(), dtype=np.float64)
            except ValueError as exc:
                raise IngestionError(f"non-numeric entry: {exc}", path=path, line_no=line_no) from exc
            if values.size != vocab:
                raise IngestionError(
                    f"row has {values.size} entries, header declares vocab={vocab}", path=path, line_no=line_no
                )
            try:
                rows.append(TokenDistribution(values))
            except DomainError as exc:
                raise IngestionError(str(exc), path=path, line_no=line_no) from exc

    if len(rows) != steps:
        raise IngestionError(f"header declares {steps} steps, body has {len(rows)}", path=path)
    try:
        seq = SequenceDistribution(tuple(rows))
    except DomainError as exc:
        raise IngestionError(str(exc), path=path) from exc

    LOGGER.debug(f"Read {steps}x{vocab} probability matrix from {path}")
    return seq


__all__ = ["MATRIX_SCHEMA", "write_matrix", "read_matrix"]
