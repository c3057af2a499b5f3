from __future__ import annotations

import unicodedata
from dataclasses import dataclass

TOKENIZER_NAME = "whitespace-lower-strip-punct/1"


def _is_punctuation(char: str) -> bool:
    return unicodedata.category(char).startswith("P")


def _strip_trailing_punctuation(token: str) -> str:
    end = len(token)
    while end > 0 and _is_punctuation(token[end - 1]):
        end -= 1
    return token[:end]


def tokenize(text: str) -> tuple[str, ...]:
    """Split on Unicode whitespace, lowercase, drop trailing punctuation and empty tokens."""
    tokens = (_strip_trailing_punctuation(raw.lower()) for raw in text.split())
    return tuple(token for token in tokens if token)


@dataclass(frozen=True)
class TokenSequence:
    tokens: tuple[str, ...]
    source_text: str = ""

    @classmethod
    def from_text(cls, text: str) -> "TokenSequence":
        return cls(tokens=tokenize(text), source_text=text)

    @classmethod
    def of(cls, tokens: "TokenSequence | str | list[str] | tuple[str, ...]") -> "TokenSequence":
        if isinstance(tokens, TokenSequence):
            return tokens
        if isinstance(tokens, str):
            return cls.from_text(tokens)
        tokens = tuple(tokens)
        return cls(tokens=tokens, source_text=" ".join(tokens))

    def __len__(self) -> int:
        return len(self.tokens)


__all__ = ["TOKENIZER_NAME", "tokenize", "TokenSequence"]
