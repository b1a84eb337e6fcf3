"""Steepest descent on the manifold of orthonormal frames.

A candidate subspace is represented by an m-by-d matrix B with B^T B = I.
Each iteration projects the Euclidean gradient onto the tangent space at B,
backtracks along the negative tangent direction with an Armijo condition, and
maps every trial point back to the manifold with a sign-fixed thin-QR
retraction.  An optional continuation schedule anneals the covariate kernel
scale between iterations; the Armijo comparison always uses the scale of the
current iteration, so the objective trace is non-increasing only within a
fixed-scale segment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .errors import DegenerateStepError, InvalidConfigError
from .kernels import KernelConfig, center, gram_rbf
from .objective import _EvalState

if TYPE_CHECKING:  # avoid a runtime cycle with datasets, which uses retract()
    from .datasets import Dataset

__all__ = [
    "LineSearchConfig",
    "OptimConfig",
    "FitResult",
    "tangent_project",
    "retract",
    "random_frame",
    "orthonormality_defect",
    "fit_kdr",
]

ORTHONORMALITY_TOL = 1e-10


@dataclass(frozen=True)
class LineSearchConfig:
    """Backtracking parameters for the Armijo search."""

    shrink: float = 0.5
    armijo_c1: float = 1e-4
    initial_step: float = 1.0
    max_backtracks: int = 30

    def __post_init__(self):
        if not (0.0 < self.shrink < 1.0):
            raise InvalidConfigError(f"shrink must be in (0,1), got {self.shrink}")
        if self.armijo_c1 <= 0.0 or self.initial_step <= 0.0:
            raise InvalidConfigError("armijo_c1 and initial_step must be positive")


@dataclass(frozen=True)
class OptimConfig:
    """Iteration budget, line search, seeding and multistart settings.

    ``iterations`` counts the annealing-schedule slots; each slot contributes
    at most one accepted descent step.  ``restarts`` adds that many seeded
    random initial frames on top of the deterministic first start, which is
    ``initial_frame`` when given and the identity columns otherwise; the best
    final objective wins.
    """

    iterations: int = 100
    line_search: LineSearchConfig = field(default_factory=LineSearchConfig)
    seed: int = 0
    restarts: int = 0
    initial_frame: np.ndarray | None = None

    def __post_init__(self):
        if self.iterations < 1:
            raise InvalidConfigError(f"iterations must be >= 1, got {self.iterations}")
        if self.restarts < 0:
            raise InvalidConfigError(f"restarts must be >= 0, got {self.restarts}")


@dataclass
class FitResult:
    """Outcome of one fit: the frame, traces, and health flags."""

    B_hat: np.ndarray
    objective_trace: list[float]
    sigma_sq_trace: list[float]
    converged_flag: bool
    final_value: float
    max_orthonormality_defect: float


def tangent_project(B: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Project ``G`` onto the tangent space at ``B``: ``G - B sym(B^T G)``.

    The result xi satisfies ``B^T xi + xi^T B = 0``.
    """
    B = np.asarray(B, dtype=float)
    G = np.asarray(G, dtype=float)
    if B.shape != G.shape:
        raise InvalidConfigError(f"B and G must have equal shapes, got {B.shape} and {G.shape}")
    BtG = B.T @ G
    return G - B @ ((BtG + BtG.T) / 2.0)


def retract(M: np.ndarray) -> np.ndarray:
    """Map a full-column-rank matrix to the manifold via thin QR.

    Signs are fixed so that the diagonal of R is positive, which makes the
    retraction a deterministic function of M (and the identity on frames that
    already satisfy the convention).
    """
    M = np.asarray(M, dtype=float)
    Q, R = np.linalg.qr(M)
    diag = np.diagonal(R)
    scale = max(1.0, float(np.abs(diag).max(initial=0.0)))
    if np.any(np.abs(diag) < 1e-13 * scale):
        raise DegenerateStepError("trial point is (numerically) rank deficient")
    signs = np.sign(diag)
    return Q * signs


def random_frame(m: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """A uniformly distributed orthonormal m-by-d frame."""
    return retract(rng.standard_normal((m, d)))


def orthonormality_defect(B: np.ndarray) -> float:
    """Max-norm of ``B^T B - I``."""
    d = B.shape[1]
    return float(np.abs(B.T @ B - np.eye(d)).max())


def _single_fit(
    X: np.ndarray,
    Gy: np.ndarray,
    B0: np.ndarray,
    scales: list[float],
    final_scale: float,
    eps: float,
    ls: LineSearchConfig,
) -> FitResult:
    annealed = any(s != final_scale for s in scales)
    B = B0
    state = _EvalState(X, Gy, B, scales[0], eps)
    grad = state.grad()
    obj_trace: list[float] = []
    scale_trace: list[float] = []
    iterates = [B0]
    converged = False
    max_defect = orthonormality_defect(B0)
    prev_scale = scales[0]

    for t, c_t in enumerate(scales):
        if t > 0 and c_t != prev_scale:
            state = _EvalState(X, Gy, B, c_t, eps)
            grad = state.grad()
        prev_scale = c_t

        xi = tangent_project(B, grad)
        slope = float(np.sum(xi * xi))  # -<grad, -xi>, the Armijo decrease rate
        if slope == 0.0:
            converged = True
            if not annealed:
                break
            continue

        f0 = state.value
        step = ls.initial_step
        accepted = None
        for _ in range(ls.max_backtracks):
            try:
                B_trial = retract(B - step * xi)
            except DegenerateStepError:
                step *= ls.shrink
                continue
            trial = _EvalState(X, Gy, B_trial, c_t, eps)
            if trial.value <= f0 - ls.armijo_c1 * step * slope:
                accepted = (B_trial, trial)
                break
            step *= ls.shrink

        if accepted is None:
            # Keep the current iterate.  With a fixed scale the search would
            # fail identically at every remaining slot, so stop early.
            converged = True
            if not annealed:
                break
            continue

        B, state = accepted
        grad = state.grad()
        max_defect = max(max_defect, orthonormality_defect(B))
        obj_trace.append(state.value)
        scale_trace.append(c_t)
        iterates.append(B)

    # Rank candidates at the final scale; with a fixed scale the trace is
    # non-increasing, so the last iterate already has the lowest value.
    if annealed:
        finals = [_EvalState(X, Gy, Bi, final_scale, eps).value for Bi in iterates]
        best = int(np.argmin(finals))
        B_best, f_best = iterates[best], finals[best]
    else:
        B_best = B
        f_best = obj_trace[-1] if obj_trace else _EvalState(X, Gy, B0, final_scale, eps).value

    return FitResult(
        B_hat=B_best,
        objective_trace=obj_trace,
        sigma_sq_trace=scale_trace,
        converged_flag=converged,
        final_value=f_best,
        max_orthonormality_defect=max_defect,
    )


def fit_kdr(
    data: Dataset,
    d: int,
    kcfg: KernelConfig,
    eps: float,
    ocfg: OptimConfig | None = None,
) -> FitResult:
    """Estimate a d-dimensional frame by minimizing the kernel contrast.

    Covariates are expected to be standardized (see ``datasets.standardize``)
    so that kernel scales are meaningful.  The response Gram matrix is built
    once with ``kcfg.response_scale``; the covariate scale either stays at
    ``kcfg.scale_x`` or follows the continuation schedule, in which case the
    returned frame is the iterate with the best objective re-evaluated at the
    final scale.
    """
    if ocfg is None:
        ocfg = OptimConfig()
    if eps <= 0.0:
        raise InvalidConfigError(f"regularization eps must be positive, got {eps}")
    X = np.asarray(data.X, dtype=float)
    n, m = X.shape
    if n < 2:
        raise InvalidConfigError(f"need at least 2 samples, got {n}")
    if not (1 <= d < m):
        raise InvalidConfigError(f"dim must satisfy 1 <= d < {m}, got {d}")

    Gy = center(gram_rbf(data.Y, kcfg.response_scale)).entries

    if kcfg.continuation is not None:
        scales = [kcfg.continuation.scale_at(t, ocfg.iterations) for t in range(ocfg.iterations)]
        final_scale = kcfg.continuation.sigma_sq_end
    else:
        scales = [kcfg.scale_x] * ocfg.iterations
        final_scale = kcfg.scale_x

    rng = np.random.default_rng(ocfg.seed)
    if ocfg.initial_frame is not None:
        first = np.asarray(ocfg.initial_frame, dtype=float)
        if first.shape != (m, d):
            raise InvalidConfigError(
                f"initial_frame must be {m}-by-{d}, got {first.shape}"
            )
        starts = [retract(first)]
    else:
        starts = [retract(np.eye(m)[:, :d])]
    starts += [random_frame(m, d, rng) for _ in range(ocfg.restarts)]

    best: FitResult | None = None
    for B0 in starts:
        result = _single_fit(X, Gy, B0, scales, final_scale, eps, ocfg.line_search)
        if best is None or result.final_value < best.final_value:
            best = result
    assert best is not None
    if best.max_orthonormality_defect > ORTHONORMALITY_TOL:
        raise DegenerateStepError(
            f"orthonormality defect {best.max_orthonormality_defect:.2e} exceeds "
            f"{ORTHONORMALITY_TOL:.0e}"
        )
    return best
