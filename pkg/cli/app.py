from __future__ import annotations

import argparse
from typing import Sequence

from cli.commands import register_commands
from config.config import settings
from core.errors import ProbeError
from utils.logger import configure_logging, get_logger

LOGGER = get_logger(__name__)

EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="probe-bounds",
        description="Distribution-free leakage metrics with high-probability guarantees.",
    )
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, choices=("DEBUG", "INFO", "WARNING", "ERROR"))
    parser.add_argument("--log-file", default=None, help="Also append logs to this rotating file")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    register_commands(subparsers)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE

    configure_logging(args.log_level, args.log_file)
    LOGGER.debug(f"Command: {args.command}")
    try:
        return args.handler(args)
    except ProbeError as exc:
        LOGGER.error(f"{type(exc).__name__}: {exc}")
        return exc.exit_code
    except KeyboardInterrupt:
        LOGGER.info("Interrupted")
        return 130


__all__ = ["build_parser", "run"]
