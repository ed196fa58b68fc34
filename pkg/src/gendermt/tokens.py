"""Deterministic whitespace-and-punctuation tokenization.

Entity indices in the challenge corpus are defined against this tokenizer,
so it must stay stable: split on whitespace, then peel leading and trailing
punctuation characters off each chunk into tokens of their own.  Interior
punctuation (hyphens, apostrophes in contractions) is left alone.
"""

from __future__ import annotations

import string

ASCII_PUNCT = frozenset(string.punctuation)

# Punctuation commonly emitted by MT systems for the supported target
# languages; applied on top of ASCII_PUNCT when tokenizing target sentences.
TARGET_EXTRA_PUNCT = frozenset("¿¡«»„“”‘’…–—،؟؛·")


def tokenize(text: str, punctuation: frozenset[str] = ASCII_PUNCT) -> list[str]:
    """Split ``text`` into tokens; ``punctuation`` chars split off chunk edges."""
    tokens: list[str] = []
    for chunk in text.split():
        lead: list[str] = []
        while len(chunk) > 1 and chunk[0] in punctuation:
            lead.append(chunk[0])
            chunk = chunk[1:]
        tail: list[str] = []
        while len(chunk) > 1 and chunk[-1] in punctuation:
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(lead)
        tokens.append(chunk)
        tokens.extend(reversed(tail))
    return tokens


def tokenize_target(text: str) -> list[str]:
    """Tokenize a target-language sentence (extended punctuation set)."""
    return tokenize(text, ASCII_PUNCT | TARGET_EXTRA_PUNCT)
