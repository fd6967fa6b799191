"""Text normalization applied before string comparison and tokenization."""

from __future__ import annotations

import re
from dataclasses import dataclass

_WS_RUN_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class NormalizationOptions:
    """What to normalize away before scoring.

    Whitespace collapse and stripping are on in every scoring path;
    lowercasing is opt-in (casing conventions differ between systems).
    """

    lowercase: bool = False
    collapse_whitespace: bool = True
    strip: bool = True


DEFAULT_NORM = NormalizationOptions()


def normalize(text: str, opts: NormalizationOptions = DEFAULT_NORM) -> str:
    """Normalize ``text`` per ``opts``. Idempotent and length-non-increasing."""
    if opts.collapse_whitespace:
        text = _WS_RUN_RE.sub(" ", text)
    if opts.strip:
        text = text.strip()
    if opts.lowercase:
        text = text.lower()
    return text
