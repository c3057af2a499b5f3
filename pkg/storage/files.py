from __future__ import annotations

import hashlib
import json
import re
from pathlib import Path

import pandas as pd

from core.errors import IngestionError, NumericalError, ReportWriteError
from storage.interfaces import MetricReport
from utils.logger import get_logger

LOGGER = get_logger(__name__)

REPORT_FILENAME = "report.json"
PLOTS_DIRNAME = "plots"
_UNSAFE = re.compile(r"[^A-Za-z0-9._-]")


def safe_name(name: str) -> str:
    """File-system safe stem; a rewritten name gets a digest suffix so distinct names never collide."""
    cleaned = _UNSAFE.sub("_", name)
    if cleaned == name and name:
        return name
    digest = hashlib.sha1(name.encode("utf-8")).hexdigest()[:8]
    return f"{cleaned}~{digest}"


def render_json(document: dict) -> str:
    try:
        return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"
    except ValueError as exc:
        raise NumericalError("Report contains a non-finite number", {"detail": str(exc)}) from exc


class FileReportStore:
    """Reports and plot tables under one output directory; writes are deterministic byte for byte."""

    def __init__(self, out_dir: Path | str):
        self.out_dir = Path(out_dir)

    @property
    def report_path(self) -> Path:
        return self.out_dir / REPORT_FILENAME

    def _write_text(self, path: Path, text: str) -> None:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
        except OSError as exc:
            raise ReportWriteError(path, exc.strerror or str(exc)) from exc
        LOGGER.debug(f"Wrote {path}")

    def save_report(self, report: MetricReport) -> None:
        self._write_text(self.report_path, render_json(report.to_dict()))
        LOGGER.info(f"Report saved: {self.report_path}")

    def load_report(self) -> MetricReport:
        try:
            with open(self.report_path, "r", encoding="utf-8") as f:
                return MetricReport.from_dict(json.load(f))
        except (OSError, ValueError, KeyError) as exc:
            raise IngestionError(f"cannot read report: {exc}", path=self.report_path) from exc

    def save_document(self, name: str, document: dict) -> None:
        self._write_text(self.out_dir / f"{safe_name(name)}.json", render_json(document))

    def save_table(self, name: str, frame: pd.DataFrame) -> None:
        path = self.out_dir / PLOTS_DIRNAME / f"{safe_name(name)}.csv"
        text = frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")
        self._write_text(path, text)


__all__ = ["FileReportStore", "render_json", "safe_name", "REPORT_FILENAME", "PLOTS_DIRNAME"]
