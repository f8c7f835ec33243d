"""Trigram similarity kernels with backend selection at import.

The compiled Cython extension is used when built; otherwise the pure-Python
implementation takes over.  ``EATCOACH_KERNEL=pure|compiled`` forces a
backend (``compiled`` raises if the extension is missing).
"""

from __future__ import annotations

import os

_requested = os.environ.get("EATCOACH_KERNEL", "").strip().lower()
if _requested not in ("", "pure", "compiled"):
    raise ImportError(f"EATCOACH_KERNEL must be 'pure' or 'compiled', got {_requested!r}")

if _requested == "pure":
    from eatcoach.kernels import pure as _impl
else:
    try:
        from eatcoach.kernels import _trigram as _impl  # type: ignore[no-redef]
    except ImportError:
        if _requested == "compiled":
            raise
        from eatcoach.kernels import pure as _impl  # type: ignore[no-redef]

BACKEND: str = _impl.BACKEND_NAME
jaccard = _impl.jaccard
score_many = _impl.score_many
pairs_above = _impl.pairs_above

__all__ = ["BACKEND", "jaccard", "score_many", "pairs_above"]
