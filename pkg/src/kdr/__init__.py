"""Kernel dimension reduction for regression.

Estimates the central subspace of a regression by minimizing the regularized
kernel conditional-covariance trace over frames with orthonormal columns,
alongside the classical inverse-regression estimators (SIR, SAVE, pHd),
synthetic benchmark generators, and CSV/figure report tooling.
"""

from .baselines import BaselineFit, SliceSpec, fit_phd, fit_save, fit_sir
from .benchmark import (
    BENCHMARK_PARAMETERS,
    BenchConfig,
    BenchResult,
    ProbeReport,
    monotonicity_probe,
    projection_distance,
    run_benchmark,
)
from .datasets import (
    Dataset,
    GenSpec,
    Standardization,
    generate,
    standardize,
    standardize_subspace,
    unstandardize_subspace,
)
from .errors import (
    BenchmarkError,
    ConstantColumnError,
    CsvFormatError,
    DegenerateStepError,
    InvalidConfigError,
    KdrError,
    NumericError,
    ShapeError,
    UnsupportedResponseError,
)
from .kernels import Continuation, GramMatrix, KernelConfig, center, gram_projected, gram_rbf, rbf
from .objective import ObjectiveEval, contrast, contrast_dual_form, gradient
from .stiefel import (
    FitResult,
    LineSearchConfig,
    OptimConfig,
    fit_kdr,
    orthonormality_defect,
    random_frame,
    retract,
    tangent_project,
)

__version__ = "0.1.0"

__all__ = [
    "BENCHMARK_PARAMETERS",
    "BaselineFit",
    "BenchConfig",
    "BenchResult",
    "BenchmarkError",
    "ConstantColumnError",
    "Continuation",
    "CsvFormatError",
    "Dataset",
    "DegenerateStepError",
    "FitResult",
    "GenSpec",
    "GramMatrix",
    "InvalidConfigError",
    "KdrError",
    "KernelConfig",
    "LineSearchConfig",
    "NumericError",
    "ObjectiveEval",
    "OptimConfig",
    "ProbeReport",
    "ShapeError",
    "SliceSpec",
    "Standardization",
    "UnsupportedResponseError",
    "center",
    "contrast",
    "contrast_dual_form",
    "fit_kdr",
    "fit_phd",
    "fit_save",
    "fit_sir",
    "generate",
    "gradient",
    "gram_projected",
    "gram_rbf",
    "monotonicity_probe",
    "orthonormality_defect",
    "projection_distance",
    "random_frame",
    "rbf",
    "retract",
    "run_benchmark",
    "standardize",
    "standardize_subspace",
    "tangent_project",
    "unstandardize_subspace",
]
