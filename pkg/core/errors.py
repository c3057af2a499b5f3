from __future__ import annotations

from pathlib import Path
from typing import Any, Mapping


class ProbeError(Exception):
    """Base error; ``exit_code`` is what the CLI returns when this escapes a command."""

    exit_code: int = 1


class DomainError(ProbeError, ValueError):
    """An argument lies outside the domain an operation is defined on."""

    exit_code = 2


class UsageError(ProbeError):
    exit_code = 2


class IngestionError(ProbeError):
    exit_code = 3

    def __init__(self, message: str, *, path: Path | str | None = None, line_no: int | None = None):
        self.path = str(path) if path is not None else None
        self.line_no = line_no
        location = ""
        if self.path is not None:
            location = self.path if line_no is None else f"{self.path}:{line_no}"
        elif line_no is not None:
            location = f"line {line_no}"
        super().__init__(f"{location}: {message}" if location else message)


class NumericalError(ProbeError, ArithmeticError):
    exit_code = 4

    def __init__(self, message: str, diagnostics: Mapping[str, Any] | None = None):
        self.diagnostics = dict(diagnostics or {})
        detail = ", ".join(f"{k}={v!r}" for k, v in self.diagnostics.items())
        super().__init__(f"{message} ({detail})" if detail else message)


class ReportWriteError(ProbeError):
    exit_code = 1

    def __init__(self, path: Path | str, reason: str):
        self.path = str(path)
        super().__init__(f"Failed to write {self.path}: {reason}")


__all__ = [
    "ProbeError",
    "DomainError",
    "UsageError",
    "IngestionError",
    "NumericalError",
    "ReportWriteError",
]
