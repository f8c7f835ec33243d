"""Keyword lexicon mapping food-name stems to dietary category labels.

The lexicon ships as a TSV data file (``keyword<TAB>label`` per line).  A
keyword matches a name when its token sequence appears contiguously in the
name's token sequence; single tokens also match simple plural forms
("apple" matches "apples", "berry" matches "berries").
"""

from __future__ import annotations

from pathlib import Path

from eatcoach.errors import ValidationError
from eatcoach.model import CategoryLabel
from eatcoach.textnorm import tokenize


def _token_matches(token: str, keyword: str) -> bool:
    if token == keyword:
        return True
    if token == keyword + "s" or token == keyword + "es":
        return True
    if keyword.endswith("y") and token == keyword[:-1] + "ies":
        return True
    return False


class CategoryLexicon:
    def __init__(self, entries: list[tuple[str, CategoryLabel]]):
        # Keyword token sequences, longest first so multi-word stems win.
        self._entries: list[tuple[tuple[str, ...], CategoryLabel]] = []
        for keyword, label in entries:
            toks = tuple(tokenize(keyword))
            if not toks:
                continue
            self._entries.append((toks, label))
        self._entries.sort(key=lambda e: (-len(e[0]), e[0]))

    def __len__(self) -> int:
        return len(self._entries)

    @classmethod
    def load(cls, path: str | Path) -> "CategoryLexicon":
        entries: list[tuple[str, CategoryLabel]] = []
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValidationError(f"{path}:{lineno}: expected keyword<TAB>label")
            keyword, raw_label = parts[0].strip(), parts[1].strip()
            try:
                label = CategoryLabel(raw_label)
            except ValueError:
                raise ValidationError(f"{path}:{lineno}: unknown label {raw_label!r}") from None
            if label is CategoryLabel.OTHER:
                raise ValidationError(f"{path}:{lineno}: 'other' is implicit, not a lexicon label")
            entries.append((keyword, label))
        return cls(entries)

    def labels_for_tokens(self, tokens: list[str]) -> set[CategoryLabel]:
        found: set[CategoryLabel] = set()
        for kw_tokens, label in self._entries:
            if label in found:
                continue
            k = len(kw_tokens)
            for start in range(len(tokens) - k + 1):
                if all(
                    _token_matches(tokens[start + off], kw_tokens[off])
                    for off in range(k)
                ):
                    found.add(label)
                    break
        return found

    def labels_for(self, *names: str) -> set[CategoryLabel]:
        """Union of label hits over the given names; {other} when none hit."""
        found: set[CategoryLabel] = set()
        for name in names:
            found |= self.labels_for_tokens(tokenize(name))
        return found or {CategoryLabel.OTHER}

    def first_label_in(self, text: str) -> CategoryLabel | None:
        """Earliest label mention in ``text`` (slot extraction helper)."""
        tokens = tokenize(text)
        best: tuple[int, int, CategoryLabel] | None = None
        for kw_tokens, label in self._entries:
            k = len(kw_tokens)
            for start in range(len(tokens) - k + 1):
                if all(
                    _token_matches(tokens[start + off], kw_tokens[off])
                    for off in range(k)
                ):
                    cand = (start, -k, label)
                    if best is None or cand < best:
                        best = cand
                    break
        return best[2] if best else None
