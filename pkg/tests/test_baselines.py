import numpy as np
import pytest

from kdr import (
    Dataset,
    InvalidConfigError,
    SliceSpec,
    UnsupportedResponseError,
    fit_phd,
    fit_save,
    fit_sir,
    projection_distance,
    random_frame,
    retract,
)
from kdr.baselines import _slices


def _linear_dataset(n, seed, noise=0.1):
    rng = np.random.default_rng(seed)
    b = np.array([3.0, 1.0, -2.0, 0.5, 0.0])
    b = b / np.linalg.norm(b)
    X = rng.standard_normal((n, 5))
    y = X @ b + noise * rng.standard_normal(n)
    return Dataset(X=X, Y=y.reshape(-1, 1)), b.reshape(-1, 1)


def test_sir_recovers_linear_direction_at_large_n():
    data, b = _linear_dataset(2000, seed=0)
    fit = fit_sir(data, 1, SliceSpec(n_slices=10))
    assert projection_distance(b, fit.B) <= 0.1
    assert not fit.rank_warning


def test_sir_binary_rank_limitation_sets_warning():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((300, 4))
    y = (X[:, 0] > 0).astype(float)
    fit = fit_sir(Dataset(X=X, Y=y.reshape(-1, 1)), 2, SliceSpec(strategy="per_label"))
    assert fit.rank_warning
    assert not fit.degenerate
    # one informative eigenvalue, the rest structural zeros
    assert fit.eigenvalues[0] > 1e-3
    assert abs(fit.eigenvalues[1]) <= 1e-10 * fit.eigenvalues[0]


def test_equal_count_slices_differ_by_at_most_one():
    y = np.random.default_rng(2).standard_normal(103)
    slices = _slices(y, SliceSpec(n_slices=10))
    sizes = sorted(len(s) for s in slices)
    assert sizes[-1] - sizes[0] <= 1
    assert sum(sizes) == 103
    assert min(sizes) >= 1


def test_slice_spec_validation():
    with pytest.raises(InvalidConfigError):
        SliceSpec(n_slices=1)
    with pytest.raises(InvalidConfigError):
        SliceSpec(strategy="bogus")
    with pytest.raises(InvalidConfigError):
        _slices(np.arange(3.0), SliceSpec(n_slices=5))


def test_all_fits_return_orthonormal_frames():
    rng = np.random.default_rng(3)
    X = rng.standard_normal((200, 6))
    y = X[:, 0] + 0.5 * X[:, 1] ** 2 + 0.1 * rng.standard_normal(200)
    data = Dataset(X=X, Y=y.reshape(-1, 1))
    for fit in (fit_sir(data, 2), fit_save(data, 2), fit_phd(data, 2)):
        d = fit.B.shape[1]
        assert np.abs(fit.B.T @ fit.B - np.eye(d)).max() <= 1e-10


def test_sir_affine_equivariance_under_diagonal_rescaling():
    data, _ = _linear_dataset(5000, seed=4)
    D = np.array([2.0, 0.5, 1.0, 4.0, 0.25])
    scaled = Dataset(X=data.X * D, Y=data.Y)
    fit_raw = fit_sir(data, 1, SliceSpec(n_slices=8))
    fit_scaled = fit_sir(scaled, 1, SliceSpec(n_slices=8))
    mapped = retract(fit_raw.B / D[:, None])
    assert projection_distance(fit_scaled.B, mapped) <= 1e-6


def test_save_null_data_matches_random_subspace_baseline():
    rng = np.random.default_rng(5)
    ref = np.eye(6)[:, :1]
    save_dists, random_dists = [], []
    for trial in range(60):
        X = rng.standard_normal((150, 6))
        y = rng.standard_normal(150)
        fit = fit_save(Dataset(X=X, Y=y.reshape(-1, 1)), 1, SliceSpec(n_slices=5))
        save_dists.append(projection_distance(ref, fit.B))
        random_dists.append(projection_distance(ref, random_frame(6, 1, rng)))
    # with no structure the SAVE direction is rotationally uniform
    assert abs(np.mean(save_dists) - np.mean(random_dists)) <= 0.08


def test_phd_requires_scalar_response():
    rng = np.random.default_rng(6)
    data = Dataset(X=rng.standard_normal((50, 4)), Y=rng.standard_normal((50, 2)))
    with pytest.raises(UnsupportedResponseError):
        fit_phd(data, 1)


def test_phd_constant_response_degenerates():
    rng = np.random.default_rng(7)
    data = Dataset(X=rng.standard_normal((50, 4)), Y=np.ones((50, 1)))
    fit = fit_phd(data, 1)
    assert fit.degenerate and fit.rank_warning
    assert np.abs(fit.B.T @ fit.B - np.eye(1)).max() <= 1e-10


def test_phd_finds_quadratic_mean_structure():
    rng = np.random.default_rng(8)
    X = rng.standard_normal((2000, 5))
    y = X[:, 0] ** 2 + 0.1 * rng.standard_normal(2000)
    fit = fit_phd(Dataset(X=X, Y=y.reshape(-1, 1)), 1)
    assert projection_distance(np.eye(5)[:, :1], fit.B) <= 0.2


@pytest.mark.parametrize("method", ["sir", "save", "phd"])
def test_matches_reference_implementation(method):
    sm = pytest.importorskip("statsmodels.regression.dimred")
    rng = np.random.default_rng(9)
    X = rng.standard_normal((400, 5))
    y = X[:, 0] / (0.5 + (X[:, 1] + 1.5) ** 2) + 0.1 * rng.standard_normal(400)
    data = Dataset(X=X, Y=y.reshape(-1, 1))
    if method == "sir":
        ours = fit_sir(data, 2, SliceSpec(n_slices=8)).B
        theirs = sm.SlicedInverseReg(y, X).fit(slice_n=50).params[:, :2]
    elif method == "save":
        ours = fit_save(data, 2, SliceSpec(n_slices=8)).B
        theirs = sm.SAVE(y, X).fit(slice_n=50).params[:, :2]
    else:
        ours = fit_phd(data, 2).B
        theirs = sm.PHD(y, X).fit().params[:, :2]
    assert projection_distance(ours, retract(np.asarray(theirs))) <= 1e-8
