"""Review corpora: loading, segmentation into (sub)sentences, coarse tagging, rating statistics."""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Protocol, Sequence

import numpy as np

from .seedlex import GeneralLexicon

NOUN, ADJ, VERB, ADV = "NOUN", "ADJ", "VERB", "ADV"
CONJ_AND, CONJ_BUT, NEG, PUNCT, OTHER = "CONJ_AND", "CONJ_BUT", "NEG", "PUNCT", "OTHER"
TAGS = (NOUN, ADJ, VERB, ADV, CONJ_AND, CONJ_BUT, NEG, PUNCT, OTHER)

SUBASPECTS = ("flavour", "environment", "service")
CHANNELS = ("overall",) + SUBASPECTS

SENTENCE_END = frozenset(".!?;…。！？；")
SUBSENTENCE_END = SENTENCE_END | frozenset(",，、")

_TOKEN = re.compile(r"\w+?(?=n't\b)|n't\b|\w+(?:'\w+)?|[^\w\s]", re.IGNORECASE)


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class Review:
    review_id: str
    user_id: str
    item_id: str
    overall_rating: int
    text: str
    subaspect_ratings: tuple[int, int, int] | None = None

    def __post_init__(self):
        if self.overall_rating not in (1, 2, 3, 4, 5):
            raise CorpusError(f"review {self.review_id}: overall_rating {self.overall_rating!r} not in 1..5")
        if self.subaspect_ratings is not None:
            if len(self.subaspect_ratings) != 3 or any(r not in (1, 2, 3, 4, 5) for r in self.subaspect_ratings):
                raise CorpusError(f"review {self.review_id}: subratings {self.subaspect_ratings!r} must be three ints in 1..5")

    def rating(self, channel: str) -> int | None:
        if channel == "overall":
            return self.overall_rating
        if self.subaspect_ratings is None:
            return None
        return self.subaspect_ratings[SUBASPECTS.index(channel)]

    def to_record(self) -> dict:
        rec = {"id": self.review_id, "user": self.user_id, "item": self.item_id, "rating": self.overall_rating}
        if self.subaspect_ratings is not None:
            rec["subratings"] = list(self.subaspect_ratings)
        rec["text"] = self.text
        return rec


# -- loading -----------------------------------------------------------------

def _as_int(value, lineno: int, name: str) -> int:
    if isinstance(value, bool):
        raise CorpusError(f"line {lineno}: field {name!r} must be an integer, got {value!r}")
    try:
        f = float(value)
    except (TypeError, ValueError):
        raise CorpusError(f"line {lineno}: field {name!r} must be an integer, got {value!r}") from None
    if f != int(f):
        raise CorpusError(f"line {lineno}: field {name!r} must be an integer, got {value!r}")
    return int(f)


def _review_from_record(rec: dict, lineno: int) -> Review:
    for name in ("id", "user", "item", "rating", "text"):
        if name not in rec or rec[name] is None:
            raise CorpusError(f"line {lineno}: missing field {name!r}")
    rating = _as_int(rec["rating"], lineno, "rating")
    sub = rec.get("subratings")
    if sub in (None, "", []):
        sub = None
    else:
        if isinstance(sub, str):
            sub = [s for s in re.split(r"[,\s]+", sub) if s]
        if len(sub) != 3:
            raise CorpusError(f"line {lineno}: field 'subratings' needs 3 values, got {sub!r}")
        sub = tuple(_as_int(s, lineno, "subratings") for s in sub)
    if not isinstance(rec["text"], str):
        raise CorpusError(f"line {lineno}: field 'text' must be a string")
    try:
        return Review(str(rec["id"]), str(rec["user"]), str(rec["item"]), rating, rec["text"], sub)
    except CorpusError as exc:
        raise CorpusError(f"line {lineno}: {exc}") from None


def _records_jsonl(fh):
    for lineno, line in enumerate(fh, 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"line {lineno}: invalid JSON ({exc.msg})") from None
        if not isinstance(rec, dict):
            raise CorpusError(f"line {lineno}: record must be a JSON object")
        yield lineno, rec


_TSV_FIELDS = ("id", "user", "item", "rating", "subratings", "text")


def _records_tsv(fh):
    for lineno, line in enumerate(fh, 1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if lineno == 1 and parts[0] == "id":
            continue
        if len(parts) != len(_TSV_FIELDS):
            raise CorpusError(f"line {lineno}: expected {len(_TSV_FIELDS)} tab-separated fields {_TSV_FIELDS}, got {len(parts)}")
        yield lineno, dict(zip(_TSV_FIELDS, parts))


def load_corpus(path: str | Path, format: str = "jsonl") -> list[Review]:
    """Read reviews in file order. ``format`` is ``jsonl`` or ``tsv``."""
    readers = {"jsonl": _records_jsonl, "tsv": _records_tsv}
    if format not in readers:
        raise CorpusError(f"unknown corpus format {format!r}; expected one of {sorted(readers)}")
    reviews, seen = [], {}
    with open(path, encoding="utf-8") as fh:
        for lineno, rec in readers[format](fh):
            review = _review_from_record(rec, lineno)
            if review.review_id in seen:
                raise CorpusError(f"line {lineno}: duplicate review id {review.review_id!r} (first seen on line {seen[review.review_id]})")
            seen[review.review_id] = lineno
            reviews.append(review)
    return reviews


def write_corpus(path: str | Path, reviews: Iterable[Review]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in reviews:
            fh.write(json.dumps(r.to_record(), ensure_ascii=False) + "\n")


# -- tagging -----------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    surface: str  # case-folded
    pos: str
    index: int


class Tagger(Protocol):
    def tag(self, words: Sequence[str]) -> list[str]: ...


def tokenize(text: str) -> list[str]:
    return [w.casefold() for w in _TOKEN.findall(" ".join(text.split()))]


def is_punct(word: str) -> bool:
    return not any(ch.isalnum() or ch == "_" for ch in word)


def _read_tag_file(text: str) -> dict[str, str]:
    entries = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        word, tag = line.split("\t") if "\t" in line else line.rsplit(None, 1)
        tag = tag.strip().upper()
        if tag not in TAGS:
            raise ValueError(f"unknown tag {tag!r} for {word!r}")
        entries[word.strip().casefold()] = tag
    return entries


def read_tag_dictionary(path: str | Path) -> dict[str, str]:
    return _read_tag_file(Path(path).read_text(encoding="utf-8"))


_SUFFIXES = (
    ("ly", ADV), ("ous", ADJ), ("ful", ADJ), ("ive", ADJ), ("able", ADJ), ("ible", ADJ),
    ("less", ADJ), ("ish", ADJ), ("ic", ADJ), ("ing", VERB), ("ed", VERB),
)

_BUNDLED_TAGS: dict[str, str] | None = None


def _bundled_tags() -> dict[str, str]:
    global _BUNDLED_TAGS
    if _BUNDLED_TAGS is None:
        text = resources.files("ctxlex.data").joinpath("en_tags.txt").read_text(encoding="utf-8")
        _BUNDLED_TAGS = _read_tag_file(text)
    return _BUNDLED_TAGS


class DictionaryTagger:
    """Dictionary + suffix-rule tagger over coarse tags.

    Precedence: punctuation, the lexicon's negation/conjunction sets, the
    user dictionary, the bundled English dictionary, general opinion words
    (tagged ADJ), suffix rules, then NOUN for any remaining word with a
    letter in it and OTHER for everything else (numbers, symbols).
    """

    def __init__(self, lexicon: GeneralLexicon | None = None, entries: dict[str, str] | None = None,
                 bundled: bool = True):
        if lexicon is None:
            lexicon = GeneralLexicon.from_sets([], [])
        self.lexicon = lexicon
        self.entries = dict(entries or {})
        self.bundled = _bundled_tags() if bundled else {}

    def tag_word(self, w: str) -> str:
        if is_punct(w):
            return PUNCT
        lex = self.lexicon
        if w in lex.negation_words:
            return NEG
        if w in lex.but_words:
            return CONJ_BUT
        if w in lex.and_words:
            return CONJ_AND
        if w in self.entries:
            return self.entries[w]
        if w in self.bundled:
            return self.bundled[w]
        if w in lex.positive_words or w in lex.negative_words:
            return ADJ
        for suffix, tag in _SUFFIXES:
            if w.endswith(suffix) and len(w) >= len(suffix) + 3:
                return tag
        if any(ch.isalpha() for ch in w):
            return NOUN
        return OTHER

    def tag(self, words: Sequence[str]) -> list[str]:
        return [self.tag_word(w) for w in words]


# -- segmentation ------------------------------------------------------------

@dataclass
class ReviewDoc:
    review: Review
    tokens: list[Token]
    sentences: list[tuple[int, int]]
    subsentences: list[tuple[int, int]]
    # index of the enclosing sentence for each subsentence
    sub_to_sentence: list[int] = field(default_factory=list)

    @property
    def word_length(self) -> int:
        return sum(1 for t in self.tokens if t.pos != PUNCT)

    def words(self, span: tuple[int, int]) -> list[str]:
        return [t.surface for t in self.tokens[span[0]:span[1]]]

    def word_offsets(self) -> np.ndarray:
        """``out[i]`` = number of non-punctuation tokens before token ``i`` (length n+1)."""
        flags = np.fromiter((t.pos != PUNCT for t in self.tokens), dtype=np.int64, count=len(self.tokens))
        return np.concatenate([[0], np.cumsum(flags)])


def _split_spans(tokens: list[Token]) -> tuple[list, list, list]:
    sentences, subsentences, owner = [], [], []
    sent_start = sub_start = 0
    for tok in tokens:
        if not (tok.pos == PUNCT and tok.surface in SUBSENTENCE_END):
            continue
        end = tok.index + 1
        if sub_start == tok.index and subsentences:
            # run of terminators ("...", "?!") joins the span just closed
            subsentences[-1] = (subsentences[-1][0], end)
            sub_start = end
            if sent_start == tok.index and sentences and sentences[-1][1] == tok.index:
                # the run began with a sentence terminator, so it extends that sentence too
                sentences[-1] = (sentences[-1][0], end)
                sent_start = end
            elif tok.surface in SENTENCE_END:
                sentences.append((sent_start, end))
                sent_start = end
            continue
        subsentences.append((sub_start, end))
        owner.append(len(sentences))
        sub_start = end
        if tok.surface in SENTENCE_END:
            sentences.append((sent_start, end))
            sent_start = end
    if sub_start < len(tokens):
        subsentences.append((sub_start, len(tokens)))
        owner.append(len(sentences))
    if sent_start < len(tokens):
        sentences.append((sent_start, len(tokens)))
    return sentences, subsentences, owner


def segment_and_tag(review: Review, tagger: Tagger | None = None) -> ReviewDoc:
    tagger = tagger or DictionaryTagger()
    words = tokenize(review.text)
    tags = tagger.tag(words)
    tokens = [Token(w, t, i) for i, (w, t) in enumerate(zip(words, tags))]
    sentences, subsentences, owner = _split_spans(tokens)
    return ReviewDoc(review, tokens, sentences, subsentences, owner)


def segment_corpus(reviews: Iterable[Review], tagger: Tagger | None = None) -> list[ReviewDoc]:
    tagger = tagger or DictionaryTagger()
    return [segment_and_tag(r, tagger) for r in reviews]


# -- rating statistics -------------------------------------------------------

@dataclass
class RatingStats:
    count: dict[str, int]
    per_star_fraction: dict[str, np.ndarray]
    mu: dict[str, float]
    sigma: dict[str, float]
    cv: dict[str, float]
    per_user_4plus: dict[str, dict[str, float]]

    @property
    def channels(self) -> list[str]:
        return [c for c in CHANNELS if c in self.mu]


def rating_stats(reviews: Sequence[Review]) -> RatingStats:
    """Per-channel star distribution, mean, population std and c_v = sigma/mu."""
    if not reviews:
        raise CorpusError("rating statistics need at least one review")
    out = RatingStats({}, {}, {}, {}, {}, {})
    for ch in CHANNELS:
        pairs = [(r.user_id, r.rating(ch)) for r in reviews if r.rating(ch) is not None]
        if not pairs:
            continue
        vals = np.array([v for _, v in pairs], dtype=np.float64)
        hist = np.bincount(vals.astype(np.int64), minlength=6)[1:6]
        mu = float(vals.mean())
        sigma = float(vals.std())
        out.count[ch] = len(vals)
        out.per_star_fraction[ch] = hist / len(vals)
        out.mu[ch] = mu
        out.sigma[ch] = sigma
        out.cv[ch] = sigma / mu
        hits: dict[str, list[int]] = {}
        for user, v in pairs:
            h = hits.setdefault(user, [0, 0])
            h[0] += v >= 4
            h[1] += 1
        out.per_user_4plus[ch] = {u: k / n for u, (k, n) in hits.items()}
    return out


def write_stats_report(stats: RatingStats, path: str | Path, per_user_path: str | Path | None = None) -> None:
    """Tabular report: channels as columns, mu / c_v / star fractions as rows."""
    chans = stats.channels
    rows = [["", *(c.capitalize() for c in chans)],
            ["n", *(str(stats.count[c]) for c in chans)],
            ["mu", *(f"{stats.mu[c]:.4f}" for c in chans)],
            ["sigma", *(f"{stats.sigma[c]:.4f}" for c in chans)],
            ["c_v", *(f"{stats.cv[c]:.4f}" for c in chans)]]
    for star in range(5):
        rows.append([f"{star + 1}-star", *(f"{stats.per_star_fraction[c][star]:.4f}" for c in chans)])
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    with open(path, "w", encoding="utf-8") as fh:
        for r in rows:
            cells = [cell.rjust(w) if i else cell.ljust(w) for i, (cell, w) in enumerate(zip(r, widths))]
            fh.write("  ".join(cells).rstrip() + "\n")
    if per_user_path is not None:
        with open(per_user_path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, delimiter="\t", lineterminator="\n")
            w.writerow(["channel", "rank", "user", "fraction_4plus"])
            for c in chans:
                ranked = sorted(stats.per_user_4plus[c].items(), key=lambda kv: (-kv[1], kv[0]))
                for rank, (user, frac) in enumerate(ranked, 1):
                    w.writerow([c, rank, user, f"{frac:.6f}"])
