"""
Registration of every subcommand on the root parser.
Each module exposes ``register(subparsers)`` and binds its ``handle`` as the handler.
"""
from __future__ import annotations

from . import decoding, evaluate, sample_size, simulate

COMMANDS = (evaluate, simulate, sample_size, decoding)


def register_commands(subparsers) -> None:
    for command in COMMANDS:
        command.register(subparsers)


__all__ = ["register_commands"]
