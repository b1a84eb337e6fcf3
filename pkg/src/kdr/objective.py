"""The regularized conditional-covariance contrast and its gradient.

The estimator scores a candidate frame ``B`` by

    J(B) = Tr[ G_Y (G_X^B + n * eps * I)^{-1} ],

where ``G_X^B`` is the centered Gram matrix of the projected covariates and
``G_Y`` the centered Gram matrix of the response.  Minimizing J over frames
with orthonormal columns drives the response toward conditional independence
of the covariates given the projection.  The trace is computed through a
Cholesky factorization of the regularized Gram matrix; no explicit inverse is
ever formed.

The Euclidean gradient follows from matrix calculus.  With
``M = G_X^B + n*eps*I``, ``A = H M^{-1} G_Y M^{-1} H`` (H the centering
projector) and ``K`` the uncentered projected Gram matrix,

    dJ/dB = (2/c) * sum_ij A_ij K_ij (x_i - x_j)(x_i - x_j)^T B,

which contracts to ``(4/c) X^T (D - W) X B`` for ``W = A * K`` (elementwise)
and ``D = diag(W 1)`` — an O(n^2 (d + m)) computation that never materializes
the per-pair outer products.

``eps`` stays fixed by default.  For asymptotic analyses one may shrink it
with the sample size (eps -> 0 while sqrt(n) * eps -> infinity); that schedule
is deliberately not enforced anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from .errors import InvalidConfigError, NumericError, ShapeError
from .kernels import GramMatrix, center_array, gram_projected

__all__ = ["ObjectiveEval", "contrast", "contrast_dual_form", "gradient"]


@dataclass(frozen=True)
class ObjectiveEval:
    """Contrast value and, when requested, its Euclidean gradient in B."""

    value: float
    gradient: np.ndarray | None = None


class _EvalState:
    """One evaluation of the contrast with everything needed for the gradient."""

    __slots__ = ("value", "_cho", "_S", "_K", "_Z", "_X", "_c")

    def __init__(self, X: np.ndarray, Gy: np.ndarray, B: np.ndarray, c: float, eps: float):
        n = X.shape[0]
        Z = X @ B
        K = np.exp(-_sq_dists(Z) / c)
        M = center_array(K)
        M[np.diag_indices_from(M)] += n * eps
        try:
            cho = cho_factor(M, lower=True)
        except LinAlgError as exc:  # eps > 0 makes M PD; failure means bad data
            raise NumericError(f"factorization of regularized Gram matrix failed: {exc}") from exc
        S = cho_solve(cho, Gy)  # M^{-1} G_Y
        self.value = float(np.trace(S))
        self._cho, self._S, self._K, self._Z, self._X, self._c = cho, S, K, Z, X, c

    def grad(self) -> np.ndarray:
        S2 = cho_solve(self._cho, self._S.T)  # M^{-1} G_Y M^{-1}
        A = center_array(S2)
        W = A * self._K
        W = 0.5 * (W + W.T)
        T = self._Z * W.sum(axis=1)[:, None] - W @ self._Z  # (D - W) Z
        return (4.0 / self._c) * (self._X.T @ T)


def _sq_dists(Z: np.ndarray) -> np.ndarray:
    sq = np.einsum("ij,ij->i", Z, Z)
    D = sq[:, None] + sq[None, :] - 2.0 * (Z @ Z.T)
    np.maximum(D, 0.0, out=D)
    np.fill_diagonal(D, 0.0)
    return D


def _check_inputs(X: np.ndarray, G_y: GramMatrix, B: np.ndarray, c: float, eps: float) -> tuple:
    X = np.asarray(X, dtype=float)
    B = np.asarray(B, dtype=float)
    if eps <= 0.0:
        raise InvalidConfigError(f"regularization eps must be positive, got {eps}")
    if c <= 0.0:
        raise InvalidConfigError(f"kernel scale must be positive, got {c}")
    if X.ndim != 2 or X.shape[0] < 2:
        raise ShapeError("X must be an n-by-m matrix with n >= 2")
    if B.ndim != 2 or B.shape[0] != X.shape[1]:
        raise ShapeError(f"B must be {X.shape[1]}-by-d, got {B.shape}")
    if not G_y.centered:
        raise InvalidConfigError("G_y must be a centered Gram matrix")
    if G_y.n != X.shape[0]:
        raise ShapeError(f"G_y is {G_y.n}x{G_y.n} but X has {X.shape[0]} rows")
    return X, B


def contrast(X: np.ndarray, G_y: GramMatrix, B: np.ndarray, c: float, eps: float) -> ObjectiveEval:
    """Contrast value ``Tr[G_Y (G_X^B + n*eps*I)^{-1}]`` at the frame ``B``.

    The value is nonnegative, zero exactly when ``G_y`` is zero (constant
    response), and invariant under right-rotation of ``B``.
    """
    X, B = _check_inputs(X, G_y, B, c, eps)
    return ObjectiveEval(_EvalState(X, G_y.entries, B, c, eps).value)


def gradient(X: np.ndarray, G_y: GramMatrix, B: np.ndarray, c: float, eps: float) -> np.ndarray:
    """Euclidean gradient of the contrast value with respect to ``B`` (m-by-d)."""
    X, B = _check_inputs(X, G_y, B, c, eps)
    return _EvalState(X, G_y.entries, B, c, eps).grad()


def contrast_dual_form(X: np.ndarray, G_y: GramMatrix, B: np.ndarray, c: float, eps: float) -> float:
    """Cross-check form ``(1/n) Tr[G_Y - G_X^B (G_X^B + n*eps*I)^{-1} G_Y]``.

    Algebraically equal to ``eps * contrast(...).value``; kept as an
    independent oracle for the main form and never used by the optimizer.
    """
    X, B = _check_inputs(X, G_y, B, c, eps)
    n = X.shape[0]
    Gy = G_y.entries
    G = center_array(gram_projected(X, B, c).entries)
    M = G + n * eps * np.eye(n)
    try:
        cho = cho_factor(M, lower=True)
    except LinAlgError as exc:
        raise NumericError(f"factorization of regularized Gram matrix failed: {exc}") from exc
    S = cho_solve(cho, Gy)
    return float((np.trace(Gy) - np.sum(G * S)) / n)
