"""Name and utterance normalization.

One normalization is used everywhere (graph ingestion, search queries, NLU
tokenization) so that the same raw text always maps to the same key.
"""

from __future__ import annotations

import re

_NON_WORD = re.compile(r"[\W_]+", re.UNICODE)


def normalize_name(raw: str) -> str:
    """Lowercase, replace punctuation with spaces, collapse whitespace, trim.

    Idempotent; empty input yields the empty string.
    """
    return _NON_WORD.sub(" ", raw.lower()).strip()


def tokenize(raw: str) -> list[str]:
    """Normalized word tokens of ``raw`` (empty list for degenerate input)."""
    norm = normalize_name(raw)
    return norm.split() if norm else []
