"""Subspace distance and the Monte Carlo benchmark harness.

``run_benchmark`` evaluates one (method, regression, parameter) cell: it draws
seeded replications, fits, maps the estimate back to original coordinates and
measures the projection Frobenius distance to the known truth.  KDR runs with
the fixed per-regression kernel scale and a small multistart; SIR and SAVE are
tuned over a slice-count grid and report the best mean, mirroring how slice
counts are usually optimized when such estimators are benchmarked.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .baselines import SliceSpec, fit_phd, fit_save, fit_sir
from .datasets import Dataset, GenSpec, generate, standardize, unstandardize_subspace
from .errors import BenchmarkError, InvalidConfigError, ShapeError
from .kernels import KernelConfig, center, gram_rbf
from .objective import contrast
from .stiefel import OptimConfig, fit_kdr

__all__ = [
    "BENCHMARK_PARAMETERS",
    "BenchConfig",
    "BenchResult",
    "ProbeReport",
    "projection_distance",
    "run_benchmark",
    "monotonicity_probe",
    "REFERENCE_NOTES",
]

METHODS = ("kdr", "sir", "save", "phd")

BENCHMARK_PARAMETERS = {"A": (0.1, 0.4, 0.8), "B": (0.1, 0.2, 0.3), "C": (0.0, 0.5, 1.0)}

# Fixed covariate kernel scales used in benchmark mode (no continuation).
BENCHMARK_KERNEL_SCALES = {"A": 2.0, "B": 0.5, "C": 2.0}

# Literature reference values for methods this harness does not run.
REFERENCE_NOTES = {
    "A": "contour-regression reference (GCR, not run here): mean 0.28/0.33/0.45 at sigma=0.1/0.4/0.8",
    "B": "",
    "C": "contour-regression reference (SCR/GCR, not run here): mean above 1.3 at a=0",
}


@dataclass(frozen=True)
class BenchConfig:
    """Knobs of the benchmark harness.

    Benchmark fits standardize covariates to unit sample SD (a near no-op for
    the Gaussian designs, and the scale at which the fixed kernel scales are
    calibrated) and evaluate distances in original coordinates.  Set
    ``standardize_sd=None`` to fit at the raw generator scale.
    """

    base_seed: int = 0
    n: int | None = None
    epsilon: float = 0.1
    iterations: int = 100
    restarts: int = 2
    standardize_sd: float | None = 1.0
    slice_grid: tuple[int, ...] = (4, 5, 8, 10, 20)
    max_failure_fraction: float = 0.1


@dataclass
class BenchResult:
    """Aggregated distances for one (method, regression, parameter) cell."""

    method: str
    regression: str
    parameter: float
    replications: int
    distances: list[float]
    mean: float
    sd: float | None
    failures: int
    wall_time_s: float
    slices_used: int | None = None
    max_orthonormality_defect: float = 0.0
    trace_monotone: bool = True


@dataclass(frozen=True)
class ProbeReport:
    """Contrast values at a truth-containing frame versus a random frame."""

    contrast_containing: float
    contrast_random: float

    @property
    def ordered(self) -> bool:
        return self.contrast_containing < self.contrast_random


def projection_distance(B0: np.ndarray, B_hat: np.ndarray) -> float:
    """Frobenius distance between the projections of two d-frames.

    Equals ``||B0 B0^T - Bh Bh^T||_F = sqrt(2d - 2 ||B0^T Bh||_F^2)`` but is
    evaluated as ``sqrt(2) * ||(I - B0 B0^T) Bh||_F`` — the same O(m d^2) cost
    without the catastrophic cancellation of the inner-product form near zero.
    Basis-invariant on both sides; range [0, sqrt(2d)].
    """
    B0 = np.asarray(B0, dtype=float)
    B_hat = np.asarray(B_hat, dtype=float)
    if B0.shape != B_hat.shape:
        raise ShapeError(f"frames must have equal shapes, got {B0.shape} and {B_hat.shape}")
    residual = B_hat - B0 @ (B0.T @ B_hat)
    return float(np.sqrt(2.0) * np.linalg.norm(residual))


def _fit_cell_once(
    method: str,
    regression: str,
    parameter: float,
    rep_seed: int,
    config: BenchConfig,
    slices: SliceSpec | None,
) -> tuple[float, float, bool]:
    """One replication; returns (distance, orthonormality defect, trace monotone)."""
    data = generate(GenSpec(regression=regression, noise_or_a=parameter, seed=rep_seed, n=config.n))
    truth_dim = data.true_B.shape[1]
    fitted = data
    if config.standardize_sd is not None:
        fitted = standardize(data, target_sd=config.standardize_sd)

    defect = 0.0
    monotone = True
    if method == "kdr":
        kcfg = KernelConfig(scale_x=BENCHMARK_KERNEL_SCALES[regression])
        ocfg = OptimConfig(iterations=config.iterations, seed=rep_seed, restarts=config.restarts)
        result = fit_kdr(fitted, truth_dim, kcfg, config.epsilon, ocfg)
        B_std = result.B_hat
        defect = result.max_orthonormality_defect
        monotone = all(
            b <= a + 1e-12 for a, b in zip(result.objective_trace, result.objective_trace[1:])
        )
    elif method == "sir":
        B_std = fit_sir(fitted, truth_dim, slices).B
    elif method == "save":
        B_std = fit_save(fitted, truth_dim, slices).B
    elif method == "phd":
        B_std = fit_phd(fitted, truth_dim).B
    else:
        raise InvalidConfigError(f"unknown method {method!r}")

    if fitted.standardization is not None:
        B_hat = unstandardize_subspace(B_std, fitted.standardization)
    else:
        B_hat = B_std
    return projection_distance(data.true_B, B_hat), defect, monotone


def _run_replications(
    method: str,
    regression: str,
    parameter: float,
    replications: int,
    config: BenchConfig,
    slices: SliceSpec | None,
) -> tuple[list[float], int, float, bool]:
    distances: list[float] = []
    failures = 0
    defect = 0.0
    monotone = True
    for r in range(replications):
        try:
            dist, dmax, mono = _fit_cell_once(
                method, regression, parameter, config.base_seed + r, config, slices
            )
        except Exception:
            failures += 1
            continue
        distances.append(dist)
        defect = max(defect, dmax)
        monotone = monotone and mono
    if failures > config.max_failure_fraction * replications:
        raise BenchmarkError(
            f"{failures}/{replications} replications failed for "
            f"({method}, {regression}, {parameter})"
        )
    return distances, failures, defect, monotone


def run_benchmark(
    regression: str,
    parameter: float,
    method: str,
    replications: int,
    config: BenchConfig | None = None,
) -> BenchResult:
    """Evaluate one benchmark cell over seeded replications."""
    config = config or BenchConfig()
    method = method.lower()
    if method not in METHODS:
        raise InvalidConfigError(f"unknown method {method!r}; expected one of {METHODS}")
    if regression not in BENCHMARK_PARAMETERS:
        raise InvalidConfigError(f"regression must be A, B or C, got {regression!r}")
    if replications < 1:
        raise InvalidConfigError(f"replications must be >= 1, got {replications}")

    start = time.perf_counter()
    slices_used: int | None = None
    if method in ("sir", "save"):
        # Tune the slice count for the best mean distance, as is customary.
        best = None
        for h in config.slice_grid:
            outcome = _run_replications(
                method, regression, parameter, replications, config, SliceSpec(n_slices=h)
            )
            mean = float(np.mean(outcome[0])) if outcome[0] else float("inf")
            if best is None or mean < best[0]:
                best = (mean, h, outcome)
        assert best is not None
        slices_used = best[1]
        distances, failures, defect, monotone = best[2]
    else:
        distances, failures, defect, monotone = _run_replications(
            method, regression, parameter, replications, config, None
        )

    mean = float(np.mean(distances)) if distances else float("nan")
    sd = float(np.std(distances, ddof=1)) if len(distances) > 1 else None
    return BenchResult(
        method=method,
        regression=regression,
        parameter=parameter,
        replications=replications,
        distances=distances,
        mean=mean,
        sd=sd,
        failures=failures,
        wall_time_s=time.perf_counter() - start,
        slices_used=slices_used,
        max_orthonormality_defect=defect,
        trace_monotone=monotone,
    )


def monotonicity_probe(
    data: Dataset,
    B_containing: np.ndarray,
    B_random: np.ndarray,
    scale: float,
    eps: float = 0.1,
) -> ProbeReport:
    """Compare the contrast at a truth-containing frame against a random frame.

    The population conditional covariance can only grow when conditioning on a
    projection, so frames containing the central subspace should score lower.
    At finite n this ordering is statistical, not per-instance.
    """
    Gy = center(gram_rbf(data.Y, scale))
    X = np.asarray(data.X, dtype=float)
    return ProbeReport(
        contrast_containing=contrast(X, Gy, B_containing, scale, eps).value,
        contrast_random=contrast(X, Gy, B_random, scale, eps).value,
    )
