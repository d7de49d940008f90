"""Fixed word sets: general opinion words, classifier seeds, negations and conjunctions."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

log = logging.getLogger(__name__)

POSITIVE = "positive"
NEGATIVE = "negative"
UNKNOWN = "unknown"

ROLES = ("positive", "negative", "negation", "and", "but", "seeds_positive", "seeds_negative")

_BUNDLED = {
    "negation": "negation.txt",
    "and": "and_words.txt",
    "but": "but_words.txt",
    "seeds_positive": "seeds_positive.txt",
    "seeds_negative": "seeds_negative.txt",
}


class LexiconError(ValueError):
    pass


def _fold(entry: str) -> str:
    return " ".join(entry.casefold().split())


@dataclass(frozen=True)
class GeneralLexicon:
    positive_words: frozenset[str]
    negative_words: frozenset[str]
    negation_words: frozenset[str]
    and_words: frozenset[str]
    but_words: frozenset[str]
    classifier_pos_seeds: frozenset[str]
    classifier_neg_seeds: frozenset[str]

    def __post_init__(self):
        clash = self.positive_words & self.negative_words
        if clash:
            raise LexiconError(f"words listed as both positive and negative: {sorted(clash)}")
        clash = self.classifier_pos_seeds & self.classifier_neg_seeds
        if clash:
            raise LexiconError(f"seed words listed as both positive and negative: {sorted(clash)}")

    @classmethod
    def from_sets(cls, positive: Iterable[str], negative: Iterable[str], *,
                  negation: Iterable[str] | None = None,
                  and_words: Iterable[str] | None = None,
                  but_words: Iterable[str] | None = None,
                  seeds_positive: Iterable[str] | None = None,
                  seeds_negative: Iterable[str] | None = None) -> "GeneralLexicon":
        """Build a lexicon from in-memory word lists; omitted roles use bundled defaults."""
        def pick(words, role):
            if words is None:
                words = bundled_words(role)
            return frozenset(_fold(w) for w in words if w.strip())

        return cls(
            positive_words=pick(positive, "positive"),
            negative_words=pick(negative, "negative"),
            negation_words=pick(negation, "negation"),
            and_words=pick(and_words, "and"),
            but_words=pick(but_words, "but"),
            classifier_pos_seeds=pick(seeds_positive, "seeds_positive"),
            classifier_neg_seeds=pick(seeds_negative, "seeds_negative"),
        )

    @property
    def max_entry_tokens(self) -> int:
        words = self.positive_words | self.negative_words | self.classifier_pos_seeds | self.classifier_neg_seeds
        return max((len(w.split()) for w in words), default=1)

    def counts(self) -> dict[str, int]:
        return {
            "positive": len(self.positive_words),
            "negative": len(self.negative_words),
            "negation": len(self.negation_words),
            "and": len(self.and_words),
            "but": len(self.but_words),
            "seeds_positive": len(self.classifier_pos_seeds),
            "seeds_negative": len(self.classifier_neg_seeds),
        }


def read_word_file(path: str | Path) -> list[str]:
    """One entry per line; blank lines and ``#`` comments are skipped."""
    words = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                words.append(_fold(line))
    return words


_MPQA_FIELD = re.compile(r"(\w+)=(\S+)")


def read_mpqa_file(path: str | Path) -> tuple[list[str], list[str]]:
    """Parse an MPQA subjectivity-clues file into (positive, negative) word lists.

    Entries with ``priorpolarity`` other than positive/negative (neutral, both)
    are skipped; repeated words (the clues list one line per POS) collapse.
    """
    pos: dict[str, None] = {}
    neg: dict[str, None] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = dict(_MPQA_FIELD.findall(line))
            if "word1" not in fields or "priorpolarity" not in fields:
                raise LexiconError(f"{path}:{lineno}: not an MPQA clue line (need word1= and priorpolarity=)")
            word = _fold(fields["word1"])
            polarity = fields["priorpolarity"]
            if polarity == "positive":
                pos[word] = None
            elif polarity == "negative":
                neg[word] = None
    return list(pos), list(neg)


def bundled_words(role: str) -> list[str]:
    if role not in _BUNDLED:
        raise LexiconError(f"no bundled default for role {role!r}; a file is required")
    text = resources.files("ctxlex.data").joinpath(_BUNDLED[role]).read_text(encoding="utf-8")
    return [_fold(l.split("#", 1)[0]) for l in text.splitlines() if l.split("#", 1)[0].strip()]


def load_word_sets(paths: Mapping[str, str | Path], fmt: str = "plain") -> GeneralLexicon:
    """Load a :class:`GeneralLexicon` from word-set files keyed by role.

    ``positive`` and ``negative`` are required, except with ``fmt="mpqa"``
    where a single ``positive`` (or ``mpqa``) file carries both polarities.
    Other roles fall back to the bundled defaults.
    """
    unknown = set(paths) - set(ROLES) - {"mpqa"}
    if unknown:
        raise LexiconError(f"unknown word-set roles: {sorted(unknown)}")
    if fmt == "mpqa":
        src = paths.get("mpqa") or paths.get("positive")
        if src is None:
            raise LexiconError("MPQA format needs an 'mpqa' (or 'positive') path")
        positive, negative = read_mpqa_file(src)
    elif fmt == "plain":
        for role in ("positive", "negative"):
            if role not in paths:
                raise LexiconError(f"missing required word set: {role}")
        positive = read_word_file(paths["positive"])
        negative = read_word_file(paths["negative"])
    else:
        raise LexiconError(f"unknown word-set format {fmt!r} (expected plain or mpqa)")

    optional = {role: read_word_file(paths[role]) for role in _BUNDLED if paths.get(role)}
    lex = GeneralLexicon.from_sets(
        positive, negative,
        negation=optional.get("negation"),
        and_words=optional.get("and"),
        but_words=optional.get("but"),
        seeds_positive=optional.get("seeds_positive"),
        seeds_negative=optional.get("seeds_negative"),
    )
    log.info("loaded word sets: %s", lex.counts())
    return lex


def polarity_of(word: str, lex: GeneralLexicon) -> str:
    w = _fold(word)
    if w in lex.positive_words:
        return POSITIVE
    if w in lex.negative_words:
        return NEGATIVE
    return UNKNOWN


def write_word_file(path: str | Path, words: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for w in sorted(words):
            fh.write(w + "\n")
