"""Unsupervised review-level classification: the supervision matrix for the solver."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .corpus import ReviewDoc
from .phrases import PhraseMatcher, negated
from .seedlex import GeneralLexicon

POS_ROW = np.array([1.0, 0.0])
NEG_ROW = np.array([0.0, 1.0])

# any callable doc -> length-2 vector in {[1,0], [0,1]} can stand in for the bundled classifier
ReviewClassifier = Callable[[ReviewDoc], np.ndarray]


@dataclass
class ReviewSentimentMatrix:
    rows: np.ndarray  # m x 2, each row [1,0] or [0,1]
    review_ids: list[str]

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.float64).reshape(-1, 2)
        if len(self.rows) != len(self.review_ids):
            raise ValueError(f"{len(self.rows)} rows for {len(self.review_ids)} review ids")
        ok = ((self.rows == POS_ROW) | (self.rows == NEG_ROW)).all(axis=1) if len(self.rows) else np.array([], bool)
        if not ok.all():
            raise ValueError(f"rows must be [1,0] or [0,1]; bad row index {int(np.argmin(ok))}")

    @property
    def labels(self) -> list[str]:
        return ["positive" if r[0] == 1.0 else "negative" for r in self.rows]

    @classmethod
    def from_labels(cls, labels: Sequence[str], review_ids: Sequence[str]) -> "ReviewSentimentMatrix":
        rows = np.array([POS_ROW if l == "positive" else NEG_ROW for l in labels]).reshape(-1, 2)
        for l in labels:
            if l not in ("positive", "negative"):
                raise ValueError(f"label must be positive or negative, got {l!r}")
        return cls(rows, list(review_ids))


class SeedClassifier:
    """Aggregate seed-word polarity over a review.

    Each seed hit counts +1 (positive) or -1 (negative); a negation word in
    the three preceding tokens of the same subsentence flips it. A
    non-negative total (including no hits at all) is classified positive.
    """

    def __init__(self, lex: GeneralLexicon):
        self.pos = PhraseMatcher(lex.classifier_pos_seeds)
        self.neg = PhraseMatcher(lex.classifier_neg_seeds)
        self.both = PhraseMatcher(self.pos.keys | self.neg.keys)

    def score(self, doc: ReviewDoc) -> int:
        words = [t.surface for t in doc.tokens]
        total = 0
        for lo, hi in doc.subsentences:
            for b, e in self.both.find(words, lo, hi):
                s = 1 if tuple(words[b:e]) in self.pos.keys else -1
                if negated(doc, b, lo):
                    s = -s
                total += s
        return total

    def __call__(self, doc: ReviewDoc) -> np.ndarray:
        return POS_ROW.copy() if self.score(doc) >= 0 else NEG_ROW.copy()


def classify_review(doc: ReviewDoc, lex: GeneralLexicon) -> np.ndarray:
    return SeedClassifier(lex)(doc)


def classify_corpus(docs: Sequence[ReviewDoc], lex: GeneralLexicon,
                    classifier: ReviewClassifier | None = None) -> ReviewSentimentMatrix:
    clf = classifier or SeedClassifier(lex)
    rows = np.array([clf(d) for d in docs], dtype=np.float64).reshape(-1, 2)
    return ReviewSentimentMatrix(rows, [d.review.review_id for d in docs])
