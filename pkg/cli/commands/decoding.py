from __future__ import annotations

import argparse
from pathlib import Path

from config.config import settings
from decoding import DecodingPolicy, effective_temperature, sequence_confidence, sequence_entropy_loss
from decoding.matrix_io import read_matrix
from storage.files import render_json


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "inspect-decoding", help="Entropy loss, confidence and adaptive temperature of a probability matrix"
    )
    parser.add_argument("--matrix", required=True, type=Path)
    parser.add_argument("--c-t", dest="c_t", type=float, default=settings.CONFIDENCE_THRESHOLD)
    parser.add_argument("--base-temperature", type=float, default=settings.BASE_TEMPERATURE)
    parser.add_argument("--top-p", type=float, default=settings.TOP_P)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    policy = DecodingPolicy(
        base_temperature=args.base_temperature,
        confidence_threshold=args.c_t,
        top_p=args.top_p,
    )
    seq = read_matrix(args.matrix)
    confidence = sequence_confidence(seq)
    summary = {
        "steps": seq.m,
        "vocab": seq.vocab_size,
        "entropy_loss": sequence_entropy_loss(seq),
        "confidence": confidence,
        "confidence_threshold": policy.confidence_threshold,
        "effective_temperature": effective_temperature(confidence, policy),
        "top_p": policy.top_p,
    }
    print(render_json(summary), end="")
    return 0
