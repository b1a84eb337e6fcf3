import numpy as np
import pytest

from kdr import (
    ConstantColumnError,
    Dataset,
    GenSpec,
    InvalidConfigError,
    generate,
    projection_distance,
    random_frame,
    standardize,
    standardize_subspace,
    unstandardize_subspace,
)
from kdr.datasets import REJECTION_ACCEPT_RATE


def test_generator_defaults_and_truth():
    a = generate(GenSpec(regression="A", noise_or_a=0.1, seed=0))
    assert a.X.shape == (100, 4) and a.Y.shape == (100, 1)
    np.testing.assert_array_equal(a.true_B, np.eye(4)[:, :2])
    b = generate(GenSpec(regression="B", noise_or_a=0.1, seed=0))
    assert b.X.shape == (100, 4)
    np.testing.assert_array_equal(b.true_B, np.eye(4)[:, 1:2])
    c = generate(GenSpec(regression="C", noise_or_a=0.0, seed=0))
    assert c.X.shape == (500, 10)
    np.testing.assert_array_equal(c.true_B, np.eye(10)[:, :1])


def test_regression_a_noiseless_value_at_unit_x1():
    # At x = (1, 0, 0, 0): 1/(0.5 + 1.5^2) + (1 + 0)^2 = 1/2.75 + 1
    x = np.array([1.0, 0.0, 0.0, 0.0])
    value = x[0] / (0.5 + (x[1] + 1.5) ** 2) + (1.0 + x[1]) ** 2
    assert value == pytest.approx(1.0 / 2.75 + 1.0, rel=1e-15)
    # and the generator applies exactly that map when sigma = 0
    data = generate(GenSpec(regression="A", noise_or_a=0.0, seed=5))
    X, y = data.X, data.Y[:, 0]
    expected = X[:, 0] / (0.5 + (X[:, 1] + 1.5) ** 2) + (1.0 + X[:, 1]) ** 2
    np.testing.assert_allclose(y, expected, rtol=1e-14)


def test_regression_b_respects_excluded_box():
    data = generate(GenSpec(regression="B", noise_or_a=0.1, seed=1, n=2000))
    assert (data.X.max(axis=1) > 0.7).all()
    assert data.X.min() >= 0.0 and data.X.max() <= 1.0


def test_regression_b_acceptance_region_volume():
    rng = np.random.default_rng(123)
    draws = rng.uniform(size=(100_000, 4))
    rate = (draws > 0.7).any(axis=1).mean()
    assert abs(rate - REJECTION_ACCEPT_RATE) <= 0.02 * REJECTION_ACCEPT_RATE


def test_regression_c_mean_near_zero():
    data = generate(GenSpec(regression="C", noise_or_a=0.0, seed=2, n=100_000))
    y = data.Y[:, 0]
    se = y.std(ddof=1) / np.sqrt(len(y))
    assert abs(y.mean()) <= 3.0 * se


def test_gaussian_designs_have_identity_covariance_at_scale():
    for reg in ("A", "C"):
        data = generate(GenSpec(regression=reg, noise_or_a=0.1, seed=3, n=10_000))
        S = np.cov(data.X.T, ddof=1)
        assert np.abs(S - np.eye(data.m)).max() <= 0.1


def test_generate_is_reproducible():
    s1 = generate(GenSpec(regression="B", noise_or_a=0.2, seed=77))
    s2 = generate(GenSpec(regression="B", noise_or_a=0.2, seed=77))
    assert np.array_equal(s1.X, s2.X) and np.array_equal(s1.Y, s2.Y)


def test_generate_rejects_unknown_regression():
    with pytest.raises(InvalidConfigError):
        GenSpec(regression="D", noise_or_a=0.1, seed=0)


def test_standardize_two_point_column():
    data = Dataset(X=np.array([[0.0], [10.0]]), Y=np.zeros((2, 1)))
    out = standardize(data, target_sd=5.0)
    expected = 5.0 * 5.0 / np.sqrt(50.0)
    np.testing.assert_allclose(out.X[:, 0], [-expected, expected], rtol=1e-14)
    assert out.X[:, 0].std(ddof=1) == pytest.approx(5.0, rel=1e-12)


def test_standardize_idempotent():
    data = generate(GenSpec(regression="A", noise_or_a=0.1, seed=4))
    once = standardize(data, target_sd=5.0)
    twice = standardize(once, target_sd=5.0)
    assert np.abs(once.X - twice.X).max() <= 1e-12


def test_standardize_composes_back_to_original():
    data = generate(GenSpec(regression="A", noise_or_a=0.1, seed=5))
    out = standardize(standardize(data, target_sd=5.0), target_sd=1.0)
    st = out.standardization
    restored = st.mean + out.X * st.scale
    np.testing.assert_allclose(restored, data.X, rtol=1e-10, atol=1e-12)


def test_standardize_names_constant_column():
    data = Dataset(
        X=np.array([[1.0, 2.0], [1.0, 3.0]]),
        Y=np.zeros((2, 1)),
        column_names=["flat", "ok"],
    )
    with pytest.raises(ConstantColumnError, match="flat"):
        standardize(data)


def test_unstandardize_isotropic_scaling_preserves_subspace():
    rng = np.random.default_rng(6)
    B = random_frame(5, 2, rng)
    st_iso = _standardization(scale=np.full(5, 3.7))
    out = unstandardize_subspace(B, st_iso)
    assert projection_distance(B, out) <= 1e-10


def test_unstandardize_keeps_axis_directions():
    st = _standardization(scale=np.array([2.0, 1.0]))
    out = unstandardize_subspace(np.array([[1.0], [0.0]]), st)
    np.testing.assert_allclose(np.abs(out), [[1.0], [0.0]], atol=1e-14)


def test_unstandardize_diagonal_hand_case():
    st = _standardization(scale=np.array([2.0, 1.0]))
    B = np.array([[1.0], [1.0]]) / np.sqrt(2.0)
    out = unstandardize_subspace(B, st)
    expected = np.array([[1.0], [2.0]]) / np.sqrt(5.0)
    np.testing.assert_allclose(np.abs(out), np.abs(expected), rtol=1e-12)


def test_standardize_subspace_inverts_unstandardize():
    rng = np.random.default_rng(7)
    st = _standardization(scale=rng.uniform(0.5, 2.0, size=6))
    B = random_frame(6, 2, rng)
    roundtrip = standardize_subspace(unstandardize_subspace(B, st), st)
    # the closed-form distance loses half the digits near zero, hence sqrt(eps)
    assert projection_distance(B, roundtrip) <= 1e-7


def test_unstandardize_change_is_small_for_near_isotropic_data():
    data = generate(GenSpec(regression="A", noise_or_a=0.1, seed=8, n=1000))
    fitted = standardize(data, target_sd=5.0)
    rng = np.random.default_rng(9)
    for _ in range(5):
        B = random_frame(4, 2, rng)
        assert projection_distance(B, unstandardize_subspace(B, fitted.standardization)) <= 0.05


def _standardization(scale):
    from kdr import Standardization

    return Standardization(mean=np.zeros_like(scale), scale=np.asarray(scale, dtype=float))
