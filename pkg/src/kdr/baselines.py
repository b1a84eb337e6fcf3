"""Classical inverse-regression estimators: SIR, SAVE and pHd.

All three whiten the covariates with the inverse square root of the sample
covariance, build a method-specific kernel matrix from slice statistics (or
response-weighted second moments for pHd), take leading eigenvectors, and map
them back through the same inverse square root.  A tiny ridge is added to the
covariance before factorization because benchmark replications occasionally
produce near-singular covariances.

These estimators carry structural rank limits: with a response taking p
distinct values, SIR can produce at most p - 1 informative directions, and a
degenerate kernel matrix (e.g. constant response for pHd) leaves the output
arbitrary.  Both conditions are reported on the returned fit object instead of
raising.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datasets import Dataset
from .errors import InvalidConfigError, NumericError, UnsupportedResponseError
from .stiefel import retract

__all__ = ["SliceSpec", "BaselineFit", "fit_sir", "fit_save", "fit_phd"]

# Eigenvalues this far below the leading one are structural zeros, not signal.
RANK_REL_TOL = 1e-10
# A kernel matrix whose leading |eigenvalue| is this small carries no direction.
DEGENERATE_ABS_TOL = 1e-12


@dataclass(frozen=True)
class SliceSpec:
    """How to partition the response for slice-based estimators.

    ``equal_count`` splits the sorted response into ``n_slices`` parts whose
    sizes differ by at most one; ``per_label`` makes one slice per distinct
    response value (classification responses).
    """

    n_slices: int = 10
    strategy: str = "equal_count"

    def __post_init__(self):
        if self.strategy not in ("equal_count", "per_label"):
            raise InvalidConfigError(f"unknown slice strategy {self.strategy!r}")
        if self.strategy == "equal_count" and self.n_slices < 2:
            raise InvalidConfigError(f"n_slices must be >= 2, got {self.n_slices}")


@dataclass(frozen=True)
class BaselineFit:
    """Estimated frame plus the eigenvalues and degeneracy flags behind it."""

    B: np.ndarray
    eigenvalues: np.ndarray
    rank_warning: bool = False
    degenerate: bool = False


def _scalar_response(data: Dataset) -> np.ndarray:
    if data.Y.shape[1] != 1:
        raise UnsupportedResponseError(
            f"estimator requires a scalar response, got {data.Y.shape[1]} columns"
        )
    return data.Y[:, 0]


def _whiten(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Centered, whitened copy of X and the inverse-square-root transform."""
    n, m = X.shape
    if n < 2:
        raise InvalidConfigError(f"need at least 2 samples, got {n}")
    Xc = X - X.mean(axis=0)
    S = (Xc.T @ Xc) / (n - 1)
    S = S + (1e-10 * np.trace(S) / m) * np.eye(m)
    w, V = np.linalg.eigh(S)
    if w[0] <= 0.0:
        raise NumericError("sample covariance is singular even after ridge jitter")
    W = (V * w**-0.5) @ V.T
    return Xc @ W, W


def _slices(y: np.ndarray, spec: SliceSpec) -> list[np.ndarray]:
    if spec.strategy == "per_label":
        return [np.flatnonzero(y == v) for v in np.unique(y)]
    if spec.n_slices > len(y):
        raise InvalidConfigError(
            f"cannot build {spec.n_slices} non-empty slices from {len(y)} samples"
        )
    order = np.argsort(y, kind="stable")
    return [idx for idx in np.array_split(order, spec.n_slices) if len(idx)]


def _top_directions(
    M: np.ndarray, W: np.ndarray, d: int, by_magnitude: bool = False
) -> BaselineFit:
    """Leading eigenvectors of M, mapped back through W and re-orthonormalized."""
    if d < 1 or d > M.shape[0]:
        raise InvalidConfigError(f"dim must be in [1, {M.shape[0]}], got {d}")
    evals, evecs = np.linalg.eigh(M)
    order = np.argsort(-np.abs(evals)) if by_magnitude else np.argsort(-evals)
    evals = evals[order]
    evecs = evecs[:, order]
    lead = float(np.abs(evals[0]))
    degenerate = lead <= DEGENERATE_ABS_TOL
    informative = int(np.sum(np.abs(evals) > RANK_REL_TOL * max(lead, DEGENERATE_ABS_TOL)))
    return BaselineFit(
        B=retract(W @ evecs[:, :d]),
        eigenvalues=evals,
        rank_warning=degenerate or d > informative,
        degenerate=degenerate,
    )


def fit_sir(data: Dataset, d: int, slices: SliceSpec | None = None) -> BaselineFit:
    """Sliced inverse regression: principal directions of the slice means."""
    slices = slices or SliceSpec()
    y = _scalar_response(data)
    X = np.asarray(data.X, dtype=float)
    n, m = X.shape
    Z, W = _whiten(X)
    M = np.zeros((m, m))
    for idx in _slices(y, slices):
        mh = Z[idx].mean(axis=0)
        M += (len(idx) / n) * np.outer(mh, mh)
    return _top_directions(M, W, d)


def fit_save(data: Dataset, d: int, slices: SliceSpec | None = None) -> BaselineFit:
    """Sliced average variance estimation: directions where within-slice
    covariances of the whitened data deviate from the identity."""
    slices = slices or SliceSpec()
    y = _scalar_response(data)
    X = np.asarray(data.X, dtype=float)
    n, m = X.shape
    Z, W = _whiten(X)
    M = np.zeros((m, m))
    for idx in _slices(y, slices):
        Zh = Z[idx]
        if len(idx) > 1:
            Zc = Zh - Zh.mean(axis=0)
            Vh = (Zc.T @ Zc) / len(idx)
        else:
            Vh = np.zeros((m, m))
        D = np.eye(m) - Vh
        M += (len(idx) / n) * (D @ D)
    return _top_directions(M, W, d)


def fit_phd(data: Dataset, d: int) -> BaselineFit:
    """Principal Hessian directions from response-weighted second moments.

    Directions are eigenvectors of ``(1/n) sum_i (y_i - ybar)(z_i z_i^T - I)``
    on whitened z, ranked by eigenvalue magnitude.  Requires a scalar response;
    structure expressed only in the response VARIANCE is invisible to it.
    """
    y = _scalar_response(data)
    X = np.asarray(data.X, dtype=float)
    n, m = X.shape
    Z, W = _whiten(X)
    yc = y - y.mean()
    # sum yc_i * I vanishes because the weights are centered.
    M = (Z.T * yc) @ Z / n
    return _top_directions(M, W, d, by_magnitude=True)
