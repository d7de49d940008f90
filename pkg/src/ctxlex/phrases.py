"""Token-sequence phrase matching shared by the classifier and the extractor."""

from __future__ import annotations

from typing import Iterable, Sequence

from .corpus import NEG, ReviewDoc

NEGATION_WINDOW = 3


def as_key(phrase: str | Sequence[str]) -> tuple[str, ...]:
    if isinstance(phrase, str):
        return tuple(phrase.casefold().split())
    return tuple(phrase)


def as_text(key: Sequence[str]) -> str:
    return " ".join(key)


class PhraseMatcher:
    """Leftmost-longest, non-overlapping matching of a fixed phrase set."""

    def __init__(self, phrases: Iterable[str | Sequence[str]]):
        self.keys = {as_key(p) for p in phrases}
        self.keys.discard(())
        self.maxlen = max((len(k) for k in self.keys), default=0)

    def __contains__(self, phrase) -> bool:
        return as_key(phrase) in self.keys

    def find(self, words: Sequence[str], start: int = 0, end: int | None = None) -> list[tuple[int, int]]:
        """Return ``(begin, end)`` token spans inside ``words[start:end]``."""
        end = len(words) if end is None else end
        spans = []
        i = start
        while i < end:
            for n in range(min(self.maxlen, end - i), 0, -1):
                if tuple(words[i:i + n]) in self.keys:
                    spans.append((i, i + n))
                    i += n
                    break
            else:
                i += 1
        return spans


def negated(doc: ReviewDoc, begin: int, sub_start: int, window: int = NEGATION_WINDOW) -> bool:
    """True iff a NEG token sits within ``window`` tokens before ``begin`` in the same subsentence."""
    lo = max(sub_start, begin - window)
    return any(doc.tokens[k].pos == NEG for k in range(lo, begin))
