"""
utils/logger.py
────────────────────────────────────────────────────────
Central logging configuration.

• The root logger is configured exactly once.
• Logs go to stderr (stdout is left for command output)
  and, on request, to a rotating file.
• The level comes from settings.LOG_LEVEL (INFO by default).
• Exports `get_logger(name)` for named loggers
  and `configure_logging(...)` for the CLI.
"""

from __future__ import annotations

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

from config.config import settings

LOG_FMT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"
DATE_FMT = "%Y-%m-%d %H:%M:%S"
LOG_LEVEL = getattr(logging, settings.LOG_LEVEL, logging.INFO)
_ROOT_LOGGER_INITIALIZED = False


def _init_root_logger() -> None:
    """Configure the root logger exactly once."""
    global _ROOT_LOGGER_INITIALIZED
    if _ROOT_LOGGER_INITIALIZED:
        return

    root = logging.getLogger()
    if not root.handlers:
        root.setLevel(LOG_LEVEL)

        console = logging.StreamHandler(sys.stderr)
        console.setFormatter(logging.Formatter(LOG_FMT, DATE_FMT))
        root.addHandler(console)

    _ROOT_LOGGER_INITIALIZED = True


def configure_logging(level: str | None = None, log_file: Path | str | None = None) -> None:
    """
    Apply the level and, optionally, a file handler.
    Calling again with the same file does not add a second handler.
    """
    _init_root_logger()
    root = logging.getLogger()
    if level:
        root.setLevel(getattr(logging, level.upper(), logging.INFO))

    if log_file is None:
        return

    path = Path(log_file).resolve()
    for handler in root.handlers:
        if isinstance(handler, RotatingFileHandler) and Path(handler.baseFilename) == path:
            return

    path.parent.mkdir(parents=True, exist_ok=True)
    file_handler = RotatingFileHandler(
        path,
        maxBytes=2_000_000,       # ~2 MB
        backupCount=3,
        encoding="utf-8",
    )
    file_handler.setFormatter(logging.Formatter(LOG_FMT, DATE_FMT))
    root.addHandler(file_handler)


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """
    Return a named logger (the root logger when name is empty).
    Usage:
        logger = get_logger(__name__)
        logger.info("Hello!")
    """
    _init_root_logger()
    return logging.getLogger(name or "root")


__all__ = ["get_logger", "configure_logging"]
