from __future__ import annotations

import argparse

from config.config import settings
from core.bounds import dkw_epsilon, sample_size_for
from core.types import Sidedness


def register(subparsers) -> None:
    parser = subparsers.add_parser("sample-size", help="Smallest n reaching a target DKW epsilon")
    parser.add_argument("--epsilon", type=float, required=True)
    parser.add_argument("--alpha", type=float, default=settings.ALPHA)
    parser.add_argument("--sided", type=int, choices=(1, 2), default=1)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    sidedness = Sidedness.parse(args.sided)
    n = sample_size_for(args.epsilon, args.alpha, sidedness)
    print(n)
    print(f"# {sidedness.value}, alpha={args.alpha}, achieved epsilon={dkw_epsilon(n, args.alpha, sidedness):.6f}")
    return 0
