"""Pure-Python trigram similarity kernels.

Fallback used when the compiled extension is unavailable.  Both backends
implement the exact same arithmetic (integer set sizes, one float division)
so their scores are bit-identical.

Trigram convention: the set of all contiguous 3-character substrings of the
normalized string, spaces included; strings shorter than 3 characters
contribute themselves as a single gram; the empty string has no grams.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Sequence

BACKEND_NAME = "pure"


def trigram_set(s: str) -> frozenset[str]:
    if not s:
        return frozenset()
    if len(s) < 3:
        return frozenset((s,))
    return frozenset(s[i : i + 3] for i in range(len(s) - 2))


def trigram_count(s: str) -> int:
    """Number of distinct grams (diagnostic parity with the compiled backend)."""
    return len(trigram_set(s))


def jaccard(a: str, b: str) -> float:
    ga = trigram_set(a)
    gb = trigram_set(b)
    if not ga or not gb:
        return 0.0
    inter = len(ga & gb)
    if inter == 0:
        return 0.0
    return inter / (len(ga) + len(gb) - inter)


def score_many(query: str, names: Sequence[str]) -> list[float]:
    """Trigram Jaccard of ``query`` against every name, in order."""
    gq = trigram_set(query)
    if not gq:
        return [0.0] * len(names)
    lq = len(gq)
    scores = []
    for name in names:
        gn = trigram_set(name)
        inter = len(gq & gn)
        scores.append(inter / (lq + len(gn) - inter) if inter else 0.0)
    return scores


def pairs_above(
    names: Sequence[str],
    threshold: float,
    only_from: Sequence[int] | None = None,
) -> list[tuple[int, int, float]]:
    """All index pairs (i < j) with trigram Jaccard >= threshold.

    With ``only_from``, only pairs touching at least one of those indices are
    considered (incremental edge construction: old-old pairs are unchanged).
    Candidate generation goes through an inverted gram index, so pairs that
    share no gram are never examined.
    """
    grams = [trigram_set(n) for n in names]
    postings: dict[str, list[int]] = defaultdict(list)
    for idx, gs in enumerate(grams):
        for g in gs:
            postings[g].append(idx)

    sources = range(len(names)) if only_from is None else sorted(set(only_from))
    source_set = set(sources)
    out: list[tuple[int, int, float]] = []
    shared: dict[int, int] = {}
    for i in sources:
        shared.clear()
        for g in grams[i]:
            for j in postings[g]:
                if j == i:
                    continue
                # Count each unordered pair once: from the lower index when
                # both ends are sources, otherwise from the source end.
                if j in source_set and j < i:
                    continue
                shared[j] = shared.get(j, 0) + 1
        li = len(grams[i])
        for j, inter in shared.items():
            score = inter / (li + len(grams[j]) - inter)
            if score >= threshold:
                a, b = (i, j) if i < j else (j, i)
                out.append((a, b, score))
    out.sort()
    return out
