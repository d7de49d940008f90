"""Non-negative multiplicative-update solver for the lexicon labelling objective.

The objective over the n x 2 lexicon matrix X >= 0 is

    l1 ||A X - Xt||^2 + l2 ||G (X - X0)||^2
  + l3 (tr X'DX - tr X'WaX - tr X'WbXE) + l4 (tr X'DsX - tr X'WsX)

and each sweep rescales X elementwise by sqrt(num / den), where num and den
collect the negative and positive parts of the gradient.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import kernels
from .constraints import E, ConstraintSet

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HyperParams:
    lambda1: float = 1.0
    lambda2: float = 1.0
    lambda3: float = 1.0
    lambda4: float = 1.0
    delta: float = 0.01
    max_iters: int = 100
    init_epsilon: float = 0.1
    denom_guard: float = 1e-12

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([self.lambda1, self.lambda2, self.lambda3, self.lambda4], dtype=np.float64)

    def validate(self) -> None:
        lam = self.lambdas
        if not np.all(np.isfinite(lam)) or (lam < 0).any():
            raise ValueError(f"lambdas must be finite and >= 0, got {lam.tolist()}")
        if not (lam > 0).any():
            raise ValueError("at least one lambda must be positive")
        if not self.delta > 0:
            raise ValueError(f"delta must be > 0, got {self.delta}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError(f"max_iters must be an integer >= 1, got {self.max_iters}")
        if not self.init_epsilon > 0:
            raise ValueError(f"init_epsilon must be > 0, got {self.init_epsilon}")
        if not self.denom_guard > 0:
            raise ValueError(f"denom_guard must be > 0, got {self.denom_guard}")

    def replace(self, **changes) -> "HyperParams":
        return HyperParams(**{**self.__dict__, **changes})


@dataclass
class SolveResult:
    X: np.ndarray
    objective_trace: np.ndarray
    iterations: int
    converged: bool
    residual: float
    labels: list[str] = field(default_factory=list)
    scores: np.ndarray = field(default_factory=lambda: np.zeros(0))


def _check(X: np.ndarray, C: ConstraintSet) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.shape != (C.n, 2):
        raise ValueError(f"X has shape {X.shape}, expected ({C.n}, 2)")
    return X


def objective(X: np.ndarray, C: ConstraintSet, h: HyperParams) -> tuple[float, tuple[float, float, float, float]]:
    """Weighted total and the four unweighted terms (R1, R2, R3, R4)."""
    X = _check(X, C)
    r1 = float(np.sum((C.A @ X - C.Xtilde) ** 2))
    r2 = float(np.sum((C.G[:, None] * (X - C.X0)) ** 2))
    r3 = float(np.sum(C.D[:, None] * X * X) - np.sum(X * (C.Wa @ X)) - np.sum(X * ((C.Wb @ X) @ E)))
    r4 = float(np.sum(C.Ds[:, None] * X * X) - np.sum(X * (C.Ws @ X)))
    terms = (r1, r2, r3, r4)
    return float(np.dot(h.lambdas, terms)), terms


def gradient(X: np.ndarray, C: ConstraintSet, h: HyperParams) -> np.ndarray:
    X = _check(X, C)
    l1, l2, l3, l4 = h.lambdas
    g = 2 * l1 * (C.A.T @ (C.A @ X - C.Xtilde))
    g += 2 * l2 * C.G[:, None] * (X - C.X0)
    g += 2 * ((l3 * C.D + l4 * C.Ds)[:, None] * X - l3 * (C.Wa @ X) - l4 * (C.Ws @ X))
    g -= 2 * l3 * (C.Wb @ X) @ E
    return g


@dataclass
class UpdateTerms:
    """Constant pieces of the update: ``den = b_den + P X``, ``num = b_num + Q X + (B X) E``.

    A carries negative entries (negated occurrences), so A'A and A'Xt are
    split by sign: positive parts go where the non-negative formulation puts
    them, negative parts move across. With A >= 0 this is the plain update.
    Lambdas are divided by their maximum first, so scaling all of them by a
    common factor leaves every term bit-identical.
    """
    P: sp.csr_matrix
    Q: sp.csr_matrix
    B: sp.csr_matrix
    b_num: np.ndarray
    b_den: np.ndarray
    guard: float

    @classmethod
    def build(cls, C: ConstraintSet, h: HyperParams) -> "UpdateTerms":
        h.validate()
        lam = h.lambdas
        l1, l2, l3, l4 = lam / lam.max()
        n = C.n
        P = sp.diags(l2 * C.G + l3 * C.D + l4 * C.Ds, format="csr")
        Q = (l3 * C.Wa + l4 * C.Ws).tocsr()
        b_num = l2 * C.G[:, None] * C.X0
        b_den = np.zeros((n, 2))
        if l1 > 0:
            AtA = (C.A.T @ C.A).tocsr()
            AtXt = C.A.T @ C.Xtilde
            P = P + l1 * AtA.maximum(0)
            Q = Q + l1 * (-AtA).maximum(0)
            b_num = b_num + l1 * np.maximum(AtXt, 0.0)
            b_den = b_den + l1 * np.maximum(-AtXt, 0.0)
        P, Q = sp.csr_matrix(P), sp.csr_matrix(Q)
        B = sp.csr_matrix(l3 * C.Wb)
        for M in (P, Q, B):
            M.sum_duplicates()
            M.sort_indices()
        return cls(P, Q, B, np.ascontiguousarray(b_num), np.ascontiguousarray(b_den), h.denom_guard)

    def apply(self, X: np.ndarray, use_numba: bool | None = None) -> np.ndarray:
        return kernels.mu_update(X, self.P, self.Q, self.B, self.b_num, self.b_den, self.guard, use_numba)


def update_step(X: np.ndarray, C: ConstraintSet, h: HyperParams, terms: UpdateTerms | None = None,
                use_numba: bool | None = None) -> np.ndarray:
    X = _check(X, C)
    if (X < 0).any():
        raise ValueError("X must be non-negative")
    terms = terms or UpdateTerms.build(C, h)
    return terms.apply(X, use_numba)


def label(X: np.ndarray) -> tuple[list[str], np.ndarray]:
    """Score x1 - x2 per row; positive iff the score is >= 0."""
    X = np.asarray(X, dtype=np.float64).reshape(-1, 2)
    scores = X[:, 0] - X[:, 1]
    return ["positive" if s >= 0 else "negative" for s in scores], scores


def initial_X(C: ConstraintSet, h: HyperParams) -> np.ndarray:
    # zero entries never move under multiplicative updates, so start off X0
    return C.X0 + h.init_epsilon


def solve(C: ConstraintSet, h: HyperParams = HyperParams(), X_init: np.ndarray | None = None,
          use_numba: bool | None = None) -> SolveResult:
    """Iterate the update from ``X0 + init_epsilon`` until ||X - X_prev||_F^2 < delta or max_iters sweeps."""
    h.validate()
    C.validate()
    terms = UpdateTerms.build(C, h)
    X = initial_X(C, h) if X_init is None else _check(X_init, C).copy()
    trace = [objective(X, C, h)[0]]
    converged, residual, it = False, float("inf"), 0
    while it < h.max_iters:
        X_new = terms.apply(X, use_numba)
        it += 1
        residual = float(np.sum((X_new - X) ** 2))
        X = X_new
        trace.append(objective(X, C, h)[0])
        if residual < h.delta:
            converged = True
            break
    log.debug("solve: %d sweeps, residual %.3g, objective %.6g", it, residual, trace[-1])
    labels, scores = label(X)
    return SolveResult(X, np.array(trace), it, converged, residual, labels, scores)
