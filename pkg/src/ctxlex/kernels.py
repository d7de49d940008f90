"""Hot loops, each with a numba-compiled path and a pure numpy/scipy path.

The numba path is used when numba imports and ``CTXLEX_DISABLE_NUMBA`` is
unset (or ``0``/``false``). Both paths compute the same quantities; results
agree to rounding (summation order differs).
"""

from __future__ import annotations

import os

import numpy as np
import scipy.sparse as sp

try:
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    numba = None
    HAVE_NUMBA = False


def _env_disabled() -> bool:
    return os.environ.get("CTXLEX_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")


USE_NUMBA = HAVE_NUMBA and not _env_disabled()


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def _njit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


# -- multiplicative update -----------------------------------------------------

@_njit
def _mu_update_nb(X, p_ptr, p_idx, p_val, q_ptr, q_idx, q_val, b_ptr, b_idx, b_val,
                  b_num, b_den, guard):
    n = X.shape[0]
    out = np.empty_like(X)
    for i in range(n):
        num0 = b_num[i, 0]
        num1 = b_num[i, 1]
        den0 = b_den[i, 0]
        den1 = b_den[i, 1]
        for k in range(q_ptr[i], q_ptr[i + 1]):
            j = q_idx[k]
            num0 += q_val[k] * X[j, 0]
            num1 += q_val[k] * X[j, 1]
        # column-swapped neighbours ("but" links)
        for k in range(b_ptr[i], b_ptr[i + 1]):
            j = b_idx[k]
            num0 += b_val[k] * X[j, 1]
            num1 += b_val[k] * X[j, 0]
        for k in range(p_ptr[i], p_ptr[i + 1]):
            j = p_idx[k]
            den0 += p_val[k] * X[j, 0]
            den1 += p_val[k] * X[j, 1]
        if num0 < 0.0:
            num0 = 0.0
        if num1 < 0.0:
            num1 = 0.0
        if den0 < guard:
            den0 = guard
        if den1 < guard:
            den1 = guard
        out[i, 0] = X[i, 0] * np.sqrt(num0 / den0)
        out[i, 1] = X[i, 1] * np.sqrt(num1 / den1)
    return out


def _mu_update_np(X, P, Q, B, b_num, b_den, guard):
    num = b_num + Q @ X + (B @ X)[:, ::-1]
    den = b_den + P @ X
    return X * np.sqrt(np.maximum(num, 0.0) / np.maximum(den, guard))


def mu_update(X: np.ndarray, P: sp.csr_matrix, Q: sp.csr_matrix, B: sp.csr_matrix,
              b_num: np.ndarray, b_den: np.ndarray, guard: float, use_numba: bool | None = None) -> np.ndarray:
    """One Jacobi sweep of ``X * sqrt(num / den)`` for an n x 2 iterate.

    ``num = b_num + Q X + (B X) E`` and ``den = b_den + P X``, where E swaps
    the two columns. Negative numerators clamp to 0, denominators floor at
    ``guard``.
    """
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba and HAVE_NUMBA:
        X = np.ascontiguousarray(X, dtype=np.float64)
        return _mu_update_nb(X, P.indptr, P.indices, P.data, Q.indptr, Q.indices, Q.data,
                             B.indptr, B.indices, B.data,
                             np.ascontiguousarray(b_num), np.ascontiguousarray(b_den), float(guard))
    return _mu_update_np(X, P, Q, B, b_num, b_den, guard)


# -- sentential similarity accumulation --------------------------------------

@_njit
def _pair_contrib_nb(ptr, pair, wstart, wend, length):
    total = 0
    for r in range(ptr.shape[0] - 1):
        k = ptr[r + 1] - ptr[r]
        total += k * (k - 1) // 2
    rows = np.empty(total, dtype=np.int64)
    cols = np.empty(total, dtype=np.int64)
    vals = np.empty(total, dtype=np.float64)
    c = 0
    for r in range(ptr.shape[0] - 1):
        lo = ptr[r]
        hi = ptr[r + 1]
        L = length[r]
        for a in range(lo, hi):
            for b in range(a + 1, hi):
                if pair[a] == pair[b]:
                    continue
                if wstart[a] <= wstart[b]:
                    d = wstart[b] - wend[a]
                else:
                    d = wstart[a] - wend[b]
                if d < 0:
                    d = 0
                v = 1.0 - d / L if L > 0 else 0.0
                if v < 0.0:
                    v = 0.0
                i = pair[a]
                j = pair[b]
                if i > j:
                    i, j = j, i
                rows[c] = i
                cols[c] = j
                vals[c] = v
                c += 1
    return rows[:c], cols[:c], vals[:c]


def _pair_contrib_np(ptr, pair, wstart, wend, length):
    rows, cols, vals = [], [], []
    for r in range(len(ptr) - 1):
        lo, hi = ptr[r], ptr[r + 1]
        if hi - lo < 2:
            continue
        a, b = np.triu_indices(hi - lo, 1)
        a += lo
        b += lo
        keep = pair[a] != pair[b]
        a, b = a[keep], b[keep]
        first = wstart[a] <= wstart[b]
        d = np.where(first, wstart[b] - wend[a], wstart[a] - wend[b]).clip(min=0)
        L = length[r]
        v = np.clip(1.0 - d / L, 0.0, None) if L > 0 else np.zeros(len(a))
        rows.append(np.minimum(pair[a], pair[b]))
        cols.append(np.maximum(pair[a], pair[b]))
        vals.append(v)
    if not rows:
        return np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0, np.float64)
    return np.concatenate(rows).astype(np.int64), np.concatenate(cols).astype(np.int64), np.concatenate(vals)


def pair_contributions(ptr: np.ndarray, pair: np.ndarray, wstart: np.ndarray, wend: np.ndarray,
                       length: np.ndarray, use_numba: bool | None = None):
    """Per intra-review co-occurrence of two distinct pairs: ``max(0, 1 - dist/length)``.

    Occurrences are grouped by review through ``ptr`` (CSR-style offsets).
    ``wstart``/``wend`` are word offsets of each occurrence's feature phrase
    (end exclusive); ``dist`` is the number of words strictly between the two
    feature phrases. Returns ``(i, j, value)`` arrays with ``i < j``.
    """
    if use_numba is None:
        use_numba = USE_NUMBA
    args = (np.asarray(ptr, np.int64), np.asarray(pair, np.int64), np.asarray(wstart, np.int64),
            np.asarray(wend, np.int64), np.asarray(length, np.float64))
    if use_numba and HAVE_NUMBA:
        return _pair_contrib_nb(*args)
    return _pair_contrib_np(*args)
