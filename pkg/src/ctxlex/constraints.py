"""Assembly of every matrix the labelling objective needs."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import groupby
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from . import kernels
from .corpus import CONJ_AND, CONJ_BUT, ReviewDoc
from .extraction import FOPair, PairOccurrence
from .seedlex import NEGATIVE, POSITIVE, GeneralLexicon, polarity_of

# right-multiplying an n x 2 matrix by E swaps its columns
E = np.array([[0.0, 1.0], [1.0, 0.0]])


def build_X0(pairs: Sequence[FOPair], lex: GeneralLexicon) -> tuple[np.ndarray, np.ndarray]:
    """General-lexicon rows [1,0] / [0,1] / [0,0] and the indicator diagonal G."""
    X0 = np.zeros((len(pairs), 2))
    for p in pairs:
        pol = polarity_of(p.opinion, lex)
        if pol == POSITIVE:
            X0[p.pair_id, 0] = 1.0
        elif pol == NEGATIVE:
            X0[p.pair_id, 1] = 1.0
    G = X0.sum(axis=1)
    return X0, G


def _symmetric(entries: dict[tuple[int, int], float], n: int) -> sp.csr_matrix:
    if not entries:
        return sp.csr_matrix((n, n))
    ij = np.array(list(entries), dtype=np.int64)
    v = np.array(list(entries.values()), dtype=np.float64)
    W = sp.coo_matrix((v, (ij[:, 0], ij[:, 1])), shape=(n, n))
    W = (W + W.T).tocsr()
    W.sum_duplicates()
    W.sort_indices()
    return W


def conjunction_counts(occurrences: Sequence[PairOccurrence], docs: Sequence[ReviewDoc]):
    """Count and/but links between pairs.

    Two occurrences in the same sentence, in the same or adjacent
    subsentences, are linked by the conjunction tokens strictly between
    their opinion phrases: any but-word makes a "but" link, otherwise any
    and-word makes an "and" link.
    """
    and_c: Counter[tuple[int, int]] = Counter()
    but_c: Counter[tuple[int, int]] = Counter()
    key = lambda o: (o.review_index, o.sentence)
    for (r, _), group in groupby(sorted(occurrences, key=key), key=key):
        doc = docs[r]
        occ = sorted(group, key=lambda o: (o.opinion_begin, o.pair_id))
        for a_i, a in enumerate(occ):
            for b in occ[a_i + 1:]:
                if a.pair_id == b.pair_id or abs(a.subsentence - b.subsentence) > 1:
                    continue
                lo, hi = a.opinion_end, b.opinion_begin
                between = {doc.tokens[k].pos for k in range(lo, hi)}
                ij = (min(a.pair_id, b.pair_id), max(a.pair_id, b.pair_id))
                if CONJ_BUT in between:
                    but_c[ij] += 1
                elif CONJ_AND in between:
                    and_c[ij] += 1
    return and_c, but_c


def build_conjunction_matrices(occurrences: Sequence[PairOccurrence], docs: Sequence[ReviewDoc], min_count: int,
                               n: int) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Binary symmetric Wa ("and") and Wb ("but") at ``min_count`` links.

    A pair of pairs reaching the threshold under both keeps only the more
    frequent link; an exact tie keeps neither.
    """
    and_c, but_c = conjunction_counts(occurrences, docs)
    wa, wb = {}, {}
    for ij in set(and_c) | set(but_c):
        a, b = and_c.get(ij, 0), but_c.get(ij, 0)
        a_ok, b_ok = a >= min_count, b >= min_count
        if a_ok and b_ok:
            if a > b:
                wa[ij] = 1.0
            elif b > a:
                wb[ij] = 1.0
        elif a_ok:
            wa[ij] = 1.0
        elif b_ok:
            wb[ij] = 1.0
    return _symmetric(wa, n), _symmetric(wb, n)


def build_sentential_similarity(occurrences: Sequence[PairOccurrence], docs: Sequence[ReviewDoc],
                                Wa: sp.spmatrix, Wb: sp.spmatrix, use_numba: bool | None = None) -> sp.csr_matrix:
    """Mean over intra-review co-occurrences of ``max(0, 1 - dist/length)``.

    Entries already carrying an and/but link are zeroed.
    """
    n = Wa.shape[0]
    occ = sorted(occurrences, key=lambda o: (o.review_index, o.feature_begin, o.pair_id))
    if not occ:
        return sp.csr_matrix((n, n))
    reviews = sorted({o.review_index for o in occ})
    offsets = {r: docs[r].word_offsets() for r in reviews}
    ptr = np.searchsorted(np.array([o.review_index for o in occ]), reviews + [reviews[-1] + 1])
    pair = np.array([o.pair_id for o in occ])
    wstart = np.array([offsets[o.review_index][o.feature_begin] for o in occ])
    wend = np.array([offsets[o.review_index][o.feature_end] for o in occ])
    length = np.array([docs[r].word_length for r in reviews], dtype=np.float64)
    i, j, v = kernels.pair_contributions(ptr, pair, wstart, wend, length, use_numba=use_numba)
    keys, inv = np.unique(i * n + j, return_inverse=True)
    mean = np.bincount(inv, weights=v) / np.bincount(inv)
    ui, uj = keys // n, keys % n
    if len(keys):
        linked = (abs(Wa) + abs(Wb)).tocsr()
        keep = (np.asarray(linked[ui, uj]).ravel() == 0) & (mean > 0)
        ui, uj, mean = ui[keep], uj[keep], mean[keep]
    upper = sp.coo_matrix((mean, (ui, uj)), shape=(n, n))
    Ws = (upper + upper.T).tocsr()
    Ws.sort_indices()
    return Ws


def degree(W: sp.spmatrix) -> np.ndarray:
    return np.asarray(W.sum(axis=1)).ravel()


@dataclass
class ConstraintSet:
    A: sp.csr_matrix
    Xtilde: np.ndarray
    X0: np.ndarray
    G: np.ndarray
    Wa: sp.csr_matrix
    Wb: sp.csr_matrix
    Ws: sp.csr_matrix

    def __post_init__(self):
        self.A = sp.csr_matrix(self.A, dtype=np.float64)
        self.Wa = sp.csr_matrix(self.Wa, dtype=np.float64)
        self.Wb = sp.csr_matrix(self.Wb, dtype=np.float64)
        self.Ws = sp.csr_matrix(self.Ws, dtype=np.float64)
        self.Xtilde = np.asarray(self.Xtilde, dtype=np.float64).reshape(-1, 2)
        self.X0 = np.asarray(self.X0, dtype=np.float64).reshape(-1, 2)
        self.G = np.asarray(self.G, dtype=np.float64).ravel()
        self.validate()

    @property
    def n(self) -> int:
        return self.X0.shape[0]

    @property
    def m(self) -> int:
        return self.Xtilde.shape[0]

    @property
    def D(self) -> np.ndarray:
        return degree(self.Wa) + degree(self.Wb)

    @property
    def Ds(self) -> np.ndarray:
        return degree(self.Ws)

    def validate(self) -> None:
        n, m = self.n, self.m
        if self.A.shape != (m, n):
            raise ValueError(f"A has shape {self.A.shape}, expected ({m}, {n})")
        if self.G.shape != (n,):
            raise ValueError(f"G has length {self.G.shape[0]}, expected {n}")
        for name in ("Wa", "Wb", "Ws"):
            W = getattr(self, name)
            if W.shape != (n, n):
                raise ValueError(f"{name} has shape {W.shape}, expected ({n}, {n})")
        if (self.X0 < 0).any():
            raise ValueError("X0 must be non-negative")
