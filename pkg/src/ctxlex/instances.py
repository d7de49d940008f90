"""Random constraint sets for property tests and benchmarks."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .constraints import ConstraintSet


def _random_symmetric(rng: np.random.Generator, n: int, n_edges: int, binary: bool) -> sp.csr_matrix:
    if n < 2 or n_edges == 0:
        return sp.csr_matrix((n, n))
    i = rng.integers(0, n, n_edges)
    j = rng.integers(0, n, n_edges)
    keep = i != j
    i, j = np.minimum(i[keep], j[keep]), np.maximum(i[keep], j[keep])
    ij = np.unique(np.stack([i, j], axis=1), axis=0)
    v = np.ones(len(ij)) if binary else rng.uniform(0.05, 1.0, len(ij))
    W = sp.coo_matrix((v, (ij[:, 0], ij[:, 1])), shape=(n, n)) if len(ij) else sp.coo_matrix((n, n))
    return (W + W.T).tocsr()


def random_constraint_set(rng: np.random.Generator, n: int, m: int, *, pairs_per_review: int = 3,
                          negation_rate: float = 0.1, fixed_fraction: float = 0.4,
                          edge_factor: float = 1.0) -> ConstraintSet:
    """A structurally realistic random instance.

    Rows of A are signed, row-normalised pair counts; Xt rows are one-hot;
    X0 marks ``fixed_fraction`` of the pairs; Wa/Wb are binary and Ws holds
    similarities in (0, 1], with Ws zeroed wherever Wa or Wb links.
    """
    rows, cols, vals = [], [], []
    for r in range(m):
        k = int(rng.integers(0, pairs_per_review + 1))
        if k == 0:
            continue
        js = rng.integers(0, n, k)
        uj, cnt = np.unique(js, return_counts=True)
        sign = np.where(rng.random(len(uj)) < negation_rate, -1.0, 1.0)
        rows += [r] * len(uj)
        cols += uj.tolist()
        vals += (sign * cnt / k).tolist()
    A = sp.csr_matrix((vals, (rows, cols)), shape=(m, n))
    Xt = np.eye(2)[rng.integers(0, 2, m)]
    G = (rng.random(n) < fixed_fraction).astype(float)
    X0 = np.eye(2)[rng.integers(0, 2, n)] * G[:, None]
    Wa = _random_symmetric(rng, n, int(edge_factor * n), True)
    Wb = _random_symmetric(rng, n, int(edge_factor * n / 2), True)
    Wb = (Wb - Wb.multiply(Wa != 0)).tocsr()
    Wb.eliminate_zeros()
    Ws = _random_symmetric(rng, n, int(2 * edge_factor * n), False)
    Ws = (Ws - Ws.multiply((Wa + Wb) != 0)).tocsr()
    Ws.eliminate_zeros()
    return ConstraintSet(A, Xt, X0, G, Wa, Wb, Ws)
