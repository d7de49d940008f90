"""Lexicon scoring, review-labelling methods, knock-out and parameter sweeps."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .classifier import classify_corpus
from .constraints import ConstraintSet
from .corpus import SUBASPECTS, Review, ReviewDoc
from .extraction import FOPair
from .io import write_csv
from .seedlex import NEGATIVE, POSITIVE, GeneralLexicon
from .solver import HyperParams, solve

Key = tuple[str, str]
METHODS = ("overall", "normalized", "subaspect", "classify")
LAMBDA_NAMES = ("lambda1", "lambda2", "lambda3", "lambda4")


@dataclass(frozen=True)
class LabeledLexicon:
    entries: Mapping[Key, str]

    def __post_init__(self):
        entries = dict(self.entries)
        for key, label in entries.items():
            if label not in (POSITIVE, NEGATIVE):
                raise ValueError(f"entry {key}: label must be positive or negative, got {label!r}")
        object.__setattr__(self, "entries", entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key) -> bool:
        return key in self.entries

    def get(self, key: Key) -> str | None:
        return self.entries.get(key)

    @classmethod
    def from_pairs(cls, pairs: Sequence[FOPair], labels: Sequence[str]) -> "LabeledLexicon":
        return cls({(p.feature, p.opinion): labels[p.pair_id] for p in pairs})


@dataclass(frozen=True)
class EvalReport:
    precision: float
    recall: float
    f_measure: float
    n_lexicon: int
    n_gold: int
    n_p_agree: int
    n_g_agree: int


def f_measure(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def _agree(predicted: LabeledLexicon, reference: LabeledLexicon) -> int:
    return sum(1 for k, v in reference.entries.items() if predicted.get(k) == v)


def score_lexicon(predicted: LabeledLexicon, pool: LabeledLexicon, gold: LabeledLexicon) -> EvalReport:
    """Precision against the pool lexicon, recall against the gold one.

    An entry agrees when the same (feature, opinion) key carries the same
    label in both lexicons.
    """
    if len(gold) == 0:
        raise ValueError("gold lexicon is empty")
    n_p = _agree(predicted, pool)
    n_g = _agree(predicted, gold)
    p = n_p / len(predicted) if len(predicted) else 0.0
    r = n_g / len(gold)
    return EvalReport(p, r, f_measure(p, r), len(predicted), len(gold), n_p, n_g)


# -- review labelling ----------------------------------------------------------

def _user_means(reviews: Sequence[Review]) -> dict[str, float]:
    acc: dict[str, list[int]] = {}
    for r in reviews:
        acc.setdefault(r.user_id, []).append(r.overall_rating)
    return {u: float(np.mean(v)) for u, v in acc.items()}


def label_reviews_by_method(reviews: Sequence[Review], docs: Sequence[ReviewDoc] | None, method: str,
                            lex: GeneralLexicon | None = None) -> list[str]:
    """One label per review.

    overall: star rating >= 4. normalized: rating minus the user's mean
    rating >= 0. subaspect: mean of the three sub-aspect ratings >= 4.
    classify: the seed-word classifier over the segmented text.
    """
    if method == "overall":
        return [POSITIVE if r.overall_rating >= 4 else NEGATIVE for r in reviews]
    if method == "normalized":
        mu = _user_means(reviews)
        return [POSITIVE if r.overall_rating - mu[r.user_id] >= 0 else NEGATIVE for r in reviews]
    if method == "subaspect":
        out = []
        for r in reviews:
            sub = [r.rating(c) for c in SUBASPECTS]
            if any(s is None for s in sub):
                raise ValueError(f"review {r.review_id}: subaspect labelling needs all sub-ratings {SUBASPECTS}")
            out.append(POSITIVE if np.mean(sub) >= 4 else NEGATIVE)
        return out
    if method == "classify":
        if docs is None or lex is None:
            raise ValueError("classify labelling needs segmented docs and a lexicon")
        return classify_corpus(docs, lex).labels
    raise ValueError(f"unknown labelling method {method!r}; expected one of {METHODS}")


@dataclass(frozen=True)
class LabellingPrecision:
    positive: float
    negative: float
    overall: float
    n_positive: int
    n_negative: int


def labelling_precision(predicted: Mapping[str, str], annotations: Mapping[str, str]) -> LabellingPrecision:
    """Agreement with annotated review labels.

    The per-class figures are the share of reviews annotated with that
    class that received the same label, so ``overall`` is their
    annotation-weighted mean. A class with no annotated reviews scores nan.
    """
    missing = sorted(set(annotations) - set(predicted))
    if missing:
        raise ValueError(f"annotated review ids not in predictions: {missing[:5]}")
    if not annotations:
        raise ValueError("no annotations")
    hits = {POSITIVE: 0, NEGATIVE: 0}
    tot = {POSITIVE: 0, NEGATIVE: 0}
    for rid, gold in annotations.items():
        if gold not in tot:
            raise ValueError(f"review {rid}: annotation must be positive or negative, got {gold!r}")
        tot[gold] += 1
        hits[gold] += predicted[rid] == gold
    share = {c: hits[c] / tot[c] if tot[c] else float("nan") for c in tot}
    overall = (hits[POSITIVE] + hits[NEGATIVE]) / len(annotations)
    return LabellingPrecision(share[POSITIVE], share[NEGATIVE], overall, tot[POSITIVE], tot[NEGATIVE])


# -- experiments ---------------------------------------------------------------

def evaluate_solve(C: ConstraintSet, h: HyperParams, pairs: Sequence[FOPair], pool: LabeledLexicon,
                   gold: LabeledLexicon) -> EvalReport:
    result = solve(C, h)
    return score_lexicon(LabeledLexicon.from_pairs(pairs, result.labels), pool, gold)


def knockout_run(C: ConstraintSet, base: HyperParams, pairs: Sequence[FOPair], pool: LabeledLexicon,
                 gold: LabeledLexicon) -> list[tuple[str, EvalReport]]:
    """The base run, then one run per lambda set to zero."""
    rows = [("all", evaluate_solve(C, base, pairs, pool, gold))]
    for name in LAMBDA_NAMES:
        rows.append((f"{name}=0", evaluate_solve(C, base.replace(**{name: 0.0}), pairs, pool, gold)))
    return rows


def sweep_points(grid: Mapping[str, Sequence[float]], base: HyperParams,
                 mode: str = "one-at-a-time") -> list[HyperParams]:
    """Hyperparameter settings visited by a sweep.

    ``cartesian`` takes the product over every listed lambda; ``one-at-a-time``
    varies each listed lambda alone, holding the rest at ``base``.
    """
    unknown = set(grid) - set(LAMBDA_NAMES)
    if unknown:
        raise ValueError(f"sweep grid has unknown keys {sorted(unknown)}")
    names = [n for n in LAMBDA_NAMES if n in grid]
    if mode == "cartesian":
        return [base.replace(**dict(zip(names, vals))) for vals in itertools.product(*(grid[n] for n in names))]
    if mode == "one-at-a-time":
        seen, out = set(), []
        for n in names:
            for v in grid[n]:
                h = base.replace(**{n: float(v)})
                if h not in seen:
                    seen.add(h)
                    out.append(h)
        return out
    raise ValueError(f"unknown sweep mode {mode!r}")


def parameter_sweep(C: ConstraintSet, grid: Mapping[str, Sequence[float]], pairs: Sequence[FOPair],
                    pool: LabeledLexicon, gold: LabeledLexicon, base: HyperParams = HyperParams(),
                    mode: str = "one-at-a-time") -> list[tuple[HyperParams, EvalReport]]:
    return [(h, evaluate_solve(C, h, pairs, pool, gold)) for h in sweep_points(grid, base, mode)]


# -- reports -------------------------------------------------------------------

REPORT_HEADER = ("precision", "recall", "f_measure", "n_lexicon", "n_gold", "n_p_agree", "n_g_agree")


def _report_row(r: EvalReport) -> list:
    return [r.precision, r.recall, r.f_measure, r.n_lexicon, r.n_gold, r.n_p_agree, r.n_g_agree]


def write_report(path, report: EvalReport) -> None:
    write_csv(path, REPORT_HEADER, [_report_row(report)])


def write_knockout(path, rows: Iterable[tuple[str, EvalReport]]) -> None:
    write_csv(path, ("run",) + REPORT_HEADER, [[name] + _report_row(r) for name, r in rows])


def write_sweep(path, rows: Iterable[tuple[HyperParams, EvalReport]]) -> None:
    write_csv(path, LAMBDA_NAMES + REPORT_HEADER,
              [[float(v) for v in h.lambdas] + _report_row(r) for h, r in rows])


def write_labelling(path, rows: Iterable[tuple[str, LabellingPrecision]]) -> None:
    write_csv(path, ("method", "positive", "negative", "overall", "n_positive", "n_negative"),
              [[m, p.positive, p.negative, p.overall, p.n_positive, p.n_negative] for m, p in rows])
