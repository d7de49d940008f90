"""Reference computations written independently of the package internals.

Everything here works on dense arrays and explicit loops or sums so it
shares no code path with the sparse trace-form implementation under test.
"""

from __future__ import annotations

import numpy as np

SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


def dense(C):
    return (C.A.toarray(), C.Xtilde, C.X0, C.G, C.Wa.toarray(), C.Wb.toarray(), C.Ws.toarray())


def pairwise_terms(X, C):
    """R1..R4 with the graph terms as sums over unordered pairs of rows."""
    A, Xt, X0, G, Wa, Wb, Ws = dense(C)
    r1 = sum(float(np.sum((A[i] @ X - Xt[i]) ** 2)) for i in range(A.shape[0]))
    r2 = sum(G[i] * float(np.sum((X[i] - X0[i]) ** 2)) for i in range(len(G)))
    r3 = r4 = 0.0
    n = X.shape[0]
    for i in range(n):
        for j in range(n):
            r3 += 0.5 * Wa[i, j] * float(np.sum((X[i] - X[j]) ** 2))
            r3 += 0.5 * Wb[i, j] * float(np.sum((X[i] - X[j][::-1]) ** 2))
            r4 += 0.5 * Ws[i, j] * float(np.sum((X[i] - X[j]) ** 2))
    return r1, r2, r3, r4


def batched_objective(Xs, C, lambdas):
    """Objective for a stack of candidate matrices ``Xs`` of shape (k, n, 2)."""
    A, Xt, X0, G, Wa, Wb, Ws = dense(C)
    l1, l2, l3, l4 = lambdas
    AX = np.einsum("mn,knc->kmc", A, Xs)
    total = l1 * np.sum((AX - Xt) ** 2, axis=(1, 2))
    total += l2 * np.sum(G[None, :, None] * (Xs - X0) ** 2, axis=(1, 2))
    n = Xs.shape[1]
    for i in range(n):
        for j in range(i + 1, n):
            d_same = np.sum((Xs[:, i] - Xs[:, j]) ** 2, axis=1)
            d_swap = np.sum((Xs[:, i] - Xs[:, j, ::-1]) ** 2, axis=1)
            total += l3 * (Wa[i, j] * d_same + Wb[i, j] * d_swap) + l4 * Ws[i, j] * d_same
    return total


def central_differences(f, X, step=1e-5):
    g = np.zeros_like(X)
    for idx in np.ndindex(X.shape):
        e = np.zeros_like(X)
        e[idx] = step
        g[idx] = (f(X + e) - f(X - e)) / (2 * step)
    return g


def grid_minimum(C, lambdas, lo=0.0, hi=2.0, step=0.01):
    """Exact minimum of the objective over the grid ``{lo, lo+step, ..., hi}^(n x 2)`` for n <= 2.

    All but the last coordinate are enumerated. Along the last one the
    objective is a convex quadratic (recovered from three evaluations), so
    the grid optimum is one of the two grid points bracketing its clipped
    minimiser.
    """
    n = C.n
    if n > 2:
        raise ValueError("grid search is only tractable for n <= 2")
    d = 2 * n
    g = lo + step * np.arange(round((hi - lo) / step) + 1)
    best = np.inf
    head = np.stack(np.meshgrid(*([g] * (d - 1)), indexing="ij"), axis=-1).reshape(-1, d - 1)
    for chunk in np.array_split(head, max(1, len(head) // 50000)):
        def at(t):
            pts = np.concatenate([chunk, np.broadcast_to(t, (len(chunk), 1))], axis=1)
            return batched_objective(pts.reshape(-1, n, 2), C, lambdas)

        f0, f1, f2 = at(np.zeros((len(chunk), 1))), at(np.ones((len(chunk), 1))), at(np.full((len(chunk), 1), 2.0))
        a = (f2 - 2 * f1 + f0) / 2
        b = f1 - f0 - a
        with np.errstate(divide="ignore", invalid="ignore"):
            t_star = np.where(a > 0, -b / (2 * a), np.where(b >= 0, lo, hi))
        t_star = np.clip(t_star, lo, hi)
        k = (t_star - lo) / step
        for t in (np.floor(k), np.ceil(k)):
            t = lo + step * np.clip(t, 0, len(g) - 1)
            best = min(best, float(np.min(f0 + b * t + a * t * t)))
    return best
