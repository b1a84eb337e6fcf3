"""Datasets: synthetic benchmark generators, standardization, CSV-backed data.

Three synthetic regressions with known central subspaces drive the benchmark
harness:

  A:  Y = X1 / (0.5 + (X2 + 1.5)^2) + (1 + X2)^2 + sigma * E,
      X ~ N(0, I_4); truth = span{e1, e2}.
  B:  Y = sin^2(pi * X2 + 1) + sigma * E,
      X uniform on [0,1]^4 minus the box where every coordinate is <= 0.7;
      truth = span{e2}.
  C:  Y = (X1 - a)^2 * E / 2,
      X ~ N(0, I_10); the response depends on X1 only through its variance;
      truth = span{e1}.

E is standard normal and independent of X throughout.  Generators are pure
functions of their seed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConstantColumnError, InvalidConfigError, ShapeError
from .stiefel import retract

__all__ = [
    "Standardization",
    "Dataset",
    "GenSpec",
    "DEFAULT_SAMPLE_SIZES",
    "generate",
    "standardize",
    "standardize_subspace",
    "unstandardize_subspace",
]

DEFAULT_SAMPLE_SIZES = {"A": 100, "B": 100, "C": 500}

# Acceptance probability of the rejection sampler for regression B:
# 1 - 0.7^4, the volume outside the excluded corner box.
REJECTION_ACCEPT_RATE = 1.0 - 0.7**4


@dataclass(frozen=True)
class Standardization:
    """Per-column state of a standardized covariate matrix.

    ``scale`` maps standardized values back to original units:
    ``x_orig = mean + x_std * scale`` column by column.
    """

    mean: np.ndarray
    scale: np.ndarray


@dataclass(frozen=True)
class Dataset:
    """Covariates X (n-by-m) and response Y (n-by-q), plus optional metadata."""

    X: np.ndarray
    Y: np.ndarray
    standardization: Standardization | None = None
    true_B: np.ndarray | None = None
    column_names: list[str] | None = None
    response_name: str | None = None

    def __post_init__(self):
        if self.X.ndim != 2 or self.Y.ndim != 2:
            raise ShapeError("X and Y must be 2-d arrays")
        if self.X.shape[0] != self.Y.shape[0]:
            raise ShapeError(
                f"X has {self.X.shape[0]} rows but Y has {self.Y.shape[0]}"
            )
        if self.X.shape[0] < 1:
            raise ShapeError("dataset is empty")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def m(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class GenSpec:
    """Which synthetic regression to draw, at what size and noise level.

    ``noise_or_a`` is the noise scale sigma for regressions A and B and the
    offset a for regression C.  ``n=None`` selects the regression's default
    sample size.
    """

    regression: str
    noise_or_a: float
    seed: int
    n: int | None = None

    def __post_init__(self):
        if self.regression not in ("A", "B", "C"):
            raise InvalidConfigError(f"regression must be A, B or C, got {self.regression!r}")
        if self.n is not None and self.n < 2:
            raise InvalidConfigError(f"n must be >= 2, got {self.n}")


def _basis(m: int, cols: list[int]) -> np.ndarray:
    return np.eye(m)[:, cols]


def generate(spec: GenSpec) -> Dataset:
    """Draw a dataset from one of the synthetic regressions."""
    n = spec.n if spec.n is not None else DEFAULT_SAMPLE_SIZES[spec.regression]
    rng = np.random.default_rng(spec.seed)

    if spec.regression == "A":
        X = rng.standard_normal((n, 4))
        E = rng.standard_normal(n)
        y = X[:, 0] / (0.5 + (X[:, 1] + 1.5) ** 2) + (1.0 + X[:, 1]) ** 2 + spec.noise_or_a * E
        true_B = _basis(4, [0, 1])
    elif spec.regression == "B":
        X = _sample_box_complement(n, rng)
        E = rng.standard_normal(n)
        y = np.sin(np.pi * X[:, 1] + 1.0) ** 2 + spec.noise_or_a * E
        true_B = _basis(4, [1])
    else:  # C
        X = rng.standard_normal((n, 10))
        E = rng.standard_normal(n)
        y = 0.5 * (X[:, 0] - spec.noise_or_a) ** 2 * E
        true_B = _basis(10, [0])

    return Dataset(X=X, Y=y.reshape(-1, 1), true_B=true_B)


def _sample_box_complement(n: int, rng: np.random.Generator, max_rounds: int = 200) -> np.ndarray:
    """Uniform draws on [0,1]^4 excluding the box with all coordinates <= 0.7."""
    out = np.empty((0, 4))
    for _ in range(max_rounds):
        # ~76% of proposals are accepted; oversample so one round usually suffices.
        budget = max(int((n - len(out)) / REJECTION_ACCEPT_RATE * 1.2) + 8, 16)
        cand = rng.uniform(size=(budget, 4))
        kept = cand[(cand > 0.7).any(axis=1)]
        out = np.vstack([out, kept])
        if len(out) >= n:
            return out[:n]
    raise RuntimeError("rejection sampler failed to fill the sample (unreachable)")


def standardize(data: Dataset, target_sd: float = 5.0) -> Dataset:
    """Rescale every covariate column to mean 0 and sample SD ``target_sd``.

    Sample SD uses the n-1 denominator.  The stored per-column (mean, scale)
    state composes with any previous standardization, so the back-map always
    returns to the ORIGINAL coordinates.  Standardizing twice at the same
    target is a no-op on the values.
    """
    if target_sd <= 0.0:
        raise InvalidConfigError(f"target_sd must be positive, got {target_sd}")
    X = np.asarray(data.X, dtype=float)
    if X.shape[0] < 2:
        raise InvalidConfigError("standardization needs at least 2 samples")
    mean = X.mean(axis=0)
    sd = X.std(axis=0, ddof=1)
    for j, s in enumerate(sd):
        if s == 0.0:
            name = data.column_names[j] if data.column_names else j
            raise ConstantColumnError(name)
    X_std = (X - mean) / sd * target_sd
    scale = sd / target_sd

    if data.standardization is not None:
        prev = data.standardization
        mean = prev.mean + prev.scale * mean
        scale = prev.scale * scale

    return replace(
        data,
        X=X_std,
        standardization=Standardization(mean=mean, scale=scale),
    )


def unstandardize_subspace(B_std: np.ndarray, standardization: Standardization) -> np.ndarray:
    """Map a frame fitted on standardized covariates back to original coordinates.

    A direction v in standardized coordinates corresponds to the functional
    v^T x_std = (v / scale)^T (x_orig - mean), so the original-coordinate frame
    is the re-orthonormalization of ``B_std / scale`` row by row.
    """
    B_std = np.asarray(B_std, dtype=float)
    scale = np.asarray(standardization.scale, dtype=float)
    if B_std.shape[0] != scale.shape[0]:
        raise ShapeError(
            f"frame has {B_std.shape[0]} rows but standardization covers {scale.shape[0]} columns"
        )
    return retract(B_std / scale[:, None])


def standardize_subspace(B_orig: np.ndarray, standardization: Standardization) -> np.ndarray:
    """Inverse of ``unstandardize_subspace``: express an original-coordinate
    frame in standardized coordinates."""
    B_orig = np.asarray(B_orig, dtype=float)
    scale = np.asarray(standardization.scale, dtype=float)
    if B_orig.shape[0] != scale.shape[0]:
        raise ShapeError(
            f"frame has {B_orig.shape[0]} rows but standardization covers {scale.shape[0]} columns"
        )
    return retract(B_orig * scale[:, None])
