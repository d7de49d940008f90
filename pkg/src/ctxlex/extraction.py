"""Feature-opinion pair generation, occurrence matching and the review-pair matrix A."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .corpus import ADJ, NOUN, VERB, ReviewDoc
from .phrases import PhraseMatcher, as_key, as_text, negated

log = logging.getLogger(__name__)

PROFILES = {"adj": (ADJ,), "adj+verb": (ADJ, VERB)}


@dataclass
class FeatureCandidate:
    phrase: str
    freq: int
    avg_pmi: float = float("nan")


@dataclass(frozen=True)
class FOPair:
    pair_id: int
    feature: str
    opinion: str
    cor: float


@dataclass(frozen=True)
class PairOccurrence:
    pair_id: int
    review_index: int
    review_id: str
    subsentence: int
    sentence: int
    feature_begin: int
    feature_end: int
    opinion_begin: int
    opinion_end: int
    negated: bool


@dataclass
class ReviewPairMatrix:
    A: sp.csr_matrix
    review_ids: list[str]
    pair_ids: list[int] = field(default_factory=list)

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape


# -- candidates ----------------------------------------------------------------

def _runs(tags: Sequence[str], wanted: str, lo: int, hi: int) -> list[tuple[int, int]]:
    out, i = [], lo
    while i < hi:
        if tags[i] == wanted:
            j = i
            while j < hi and tags[j] == wanted:
                j += 1
            out.append((i, j))
            i = j
        else:
            i += 1
    return out


def noun_phrases(doc: ReviewDoc, lo: int, hi: int) -> list[tuple[int, int]]:
    """Maximal NOUN runs, extended left over an immediately preceding ADJ run."""
    tags = [t.pos for t in doc.tokens]
    spans = []
    for b, e in _runs(tags, NOUN, lo, hi):
        while b > lo and tags[b - 1] == ADJ:
            b -= 1
        spans.append((b, e))
    return spans


def extract_feature_candidates(docs: Sequence[ReviewDoc], freq_threshold: int) -> list[FeatureCandidate]:
    counts: Counter[str] = Counter()
    for doc in docs:
        words = [t.surface for t in doc.tokens]
        for lo, hi in doc.subsentences:
            for b, e in noun_phrases(doc, lo, hi):
                counts[as_text(words[b:e])] += 1
    return [FeatureCandidate(p, c) for p, c in sorted(counts.items()) if c >= freq_threshold]


# -- co-occurrence counts and PMI --------------------------------------------

class CooccurrenceCounts:
    """Phrase frequencies and per-subsentence co-occurrence counts.

    Each phrase group is matched independently (leftmost-longest,
    non-overlapping within the group). ``freq(p)`` counts matches;
    ``cofreq(p, q)`` counts subsentences containing both phrases.
    """

    def __init__(self, docs: Sequence[ReviewDoc], *groups: Iterable[str]):
        self._freq: Counter[str] = Counter()
        self._co: Counter[tuple[str, str]] = Counter()
        matchers = [PhraseMatcher(g) for g in groups]
        for doc in docs:
            words = [t.surface for t in doc.tokens]
            for lo, hi in doc.subsentences:
                present = set()
                for m in matchers:
                    for b, e in m.find(words, lo, hi):
                        p = as_text(words[b:e])
                        self._freq[p] += 1
                        present.add(p)
                present = sorted(present)
                for i, p in enumerate(present):
                    for q in present[i + 1:]:
                        self._co[(p, q)] += 1

    def freq(self, p: str) -> int:
        return self._freq.get(as_text(as_key(p)), 0)

    def cofreq(self, p: str, q: str) -> int:
        p, q = sorted((as_text(as_key(p)), as_text(as_key(q))))
        return self._co.get((p, q), 0)


def pmi(p1: str, p2: str, counts) -> float:
    """Freq(p1, p2) / (Freq(p1) * Freq(p2)), co-occurrence counted per subsentence."""
    f1, f2 = counts.freq(p1), counts.freq(p2)
    if f1 <= 0 or f2 <= 0:
        raise ValueError(f"PMI undefined: zero frequency for {p1!r} ({f1}) or {p2!r} ({f2})")
    return counts.cofreq(p1, p2) / (f1 * f2)


def filter_features(cands: Sequence[FeatureCandidate], discriminators: Sequence[str], pmi_threshold: float,
                    docs: Sequence[ReviewDoc]) -> list[FeatureCandidate]:
    """Keep candidates whose mean PMI over the discriminator phrases is >= ``pmi_threshold``.

    Discriminators that never occur in the corpus are left out of the mean.
    """
    if not discriminators:
        raise ValueError("at least one discriminator phrase is required")
    counts = CooccurrenceCounts(docs, [c.phrase for c in cands], discriminators)
    live = [d for d in discriminators if counts.freq(d) > 0]
    if len(live) < len(discriminators):
        log.warning("discriminators absent from corpus: %s", sorted(set(discriminators) - set(live)))
    kept = []
    for c in cands:
        if live and counts.freq(c.phrase) > 0:
            avg = float(np.mean([pmi(c.phrase, d, counts) for d in live]))
        else:
            avg = 0.0
        c = FeatureCandidate(c.phrase, c.freq, avg)
        if avg >= pmi_threshold:
            kept.append(c)
    return kept


# -- pairs and occurrences ---------------------------------------------------

def _subsentence_units(doc: ReviewDoc, fmatch: PhraseMatcher, opinion_tags: tuple[str, ...]):
    """Yield (sub_index, lo, hi, feature spans, opinion spans) per subsentence.

    Opinion candidates are maximal runs of one opinion tag over tokens not
    already covered by a feature match.
    """
    words = [t.surface for t in doc.tokens]
    tags = [t.pos for t in doc.tokens]
    for s, (lo, hi) in enumerate(doc.subsentences):
        fspans = fmatch.find(words, lo, hi)
        covered = set()
        for b, e in fspans:
            covered.update(range(b, e))
        masked = [None if k in covered else tags[k] for k in range(len(tags))]
        ospans = []
        for tag in opinion_tags:
            ospans.extend(_runs(masked, tag, lo, hi))
        ospans.sort()
        yield s, lo, hi, words, fspans, ospans


def build_pairs(docs: Sequence[ReviewDoc], features: Sequence[FeatureCandidate | str], cor_threshold: float,
                lang_profile: str = "adj") -> list[FOPair]:
    """Pair each feature with opinion phrases sharing a subsentence; keep COR >= threshold."""
    if lang_profile not in PROFILES:
        raise ValueError(f"unknown language profile {lang_profile!r}; expected one of {sorted(PROFILES)}")
    names = [f.phrase if isinstance(f, FeatureCandidate) else f for f in features]
    fmatch = PhraseMatcher(names)
    ffreq: Counter[str] = Counter()
    co: Counter[tuple[str, str]] = Counter()
    for doc in docs:
        for _, _, _, words, fspans, ospans in _subsentence_units(doc, fmatch, PROFILES[lang_profile]):
            fs = [as_text(words[b:e]) for b, e in fspans]
            ffreq.update(fs)
            os_ = {as_text(words[b:e]) for b, e in ospans}
            for f in set(fs):
                for o in os_:
                    co[(f, o)] += 1
    kept = []
    for (f, o), c in co.items():
        cor = c / ffreq[f]
        if cor >= cor_threshold:
            kept.append((f, o, cor))
    kept.sort()
    return [FOPair(i, f, o, cor) for i, (f, o, cor) in enumerate(kept)]


def match_occurrences(docs: Sequence[ReviewDoc], pairs: Sequence[FOPair],
                      lang_profile: str = "adj") -> list[PairOccurrence]:
    """One occurrence per (pair, subsentence) hit, using the first feature and opinion match."""
    index = {(p.feature, p.opinion): p.pair_id for p in pairs}
    fmatch = PhraseMatcher({p.feature for p in pairs})
    out = []
    for r, doc in enumerate(docs):
        for s, lo, hi, words, fspans, ospans in _subsentence_units(doc, fmatch, PROFILES[lang_profile]):
            first_f: dict[str, tuple[int, int]] = {}
            for b, e in fspans:
                first_f.setdefault(as_text(words[b:e]), (b, e))
            first_o: dict[str, tuple[int, int]] = {}
            for b, e in ospans:
                first_o.setdefault(as_text(words[b:e]), (b, e))
            hits = []
            for f, (fb, fe) in first_f.items():
                for o, (ob, oe) in first_o.items():
                    pid = index.get((f, o))
                    if pid is not None:
                        hits.append(PairOccurrence(pid, r, doc.review.review_id, s, doc.sub_to_sentence[s],
                                                   fb, fe, ob, oe, negated(doc, ob, lo)))
            out.extend(sorted(hits, key=lambda h: h.pair_id))
    return out


def build_A(occurrences: Iterable[PairOccurrence], m: int, n: int,
            review_ids: Sequence[str] | None = None) -> ReviewPairMatrix:
    """Row-normalised pair frequencies; sign -1 where most occurrences are negated."""
    freq: Counter[tuple[int, int]] = Counter()
    neg: Counter[tuple[int, int]] = Counter()
    for o in occurrences:
        freq[(o.review_index, o.pair_id)] += 1
        neg[(o.review_index, o.pair_id)] += o.negated
    totals = np.zeros(m)
    for (i, _), c in freq.items():
        totals[i] += c
    keys = sorted(freq)
    rows = np.array([k[0] for k in keys], dtype=np.int64)
    cols = np.array([k[1] for k in keys], dtype=np.int64)
    vals = np.array([(-1.0 if 2 * neg[k] > freq[k] else 1.0) * freq[k] / totals[k[0]] for k in keys])
    A = sp.csr_matrix((vals, (rows, cols)), shape=(m, n))
    ids = list(review_ids) if review_ids is not None else [str(i) for i in range(m)]
    return ReviewPairMatrix(A, ids, list(range(n)))
