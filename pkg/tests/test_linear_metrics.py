import math

import numpy as np
import pytest

from core.errors import CollinearityError, DimensionMismatchError, InsufficientDataError, MetricsError
from learn.linear import fit_linear, independent_columns, predict_linear
from learn.metrics import metrics


def test_exact_linear_recovery():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(30, 2))
    y = 1 + 2 * X[:, 0] - 3 * X[:, 1]
    model = fit_linear(X, y)
    np.testing.assert_allclose(model.coef, [2.0, -3.0], atol=1e-10)
    assert model.intercept == pytest.approx(1.0)
    np.testing.assert_allclose(predict_linear(model, X), y, atol=1e-10)
    np.testing.assert_allclose(model.feature_importances, np.abs(model.coef) * X.std(axis=0))


def test_target_orthogonal_to_features():
    X = np.array([[1.0], [-1.0], [1.0], [-1.0]])
    model = fit_linear(X, [1.0, 1.0, -1.0, -1.0])
    np.testing.assert_allclose(model.coef, [0.0], atol=1e-12)
    assert model.intercept == pytest.approx(0.0, abs=1e-12)


def test_collinear_and_short_designs():
    x = np.arange(10, dtype=float)
    with pytest.raises(CollinearityError):
        fit_linear(np.column_stack([x, 2 * x]), x)
    with pytest.raises(InsufficientDataError):
        fit_linear(np.array([[1.0], [2.0]]), [1.0, 2.0])


def test_metrics_worked_example():
    m = metrics([4.0, 1.0, 4.0], [2.0, 2.0, 4.0])
    assert m.rmse == pytest.approx(math.sqrt(5 / 3))
    assert m.mae == pytest.approx(1.0)
    assert m.mape == pytest.approx(50.0)


def test_perfect_forecast_scores_zero():
    m = metrics([1.0, -2.0], [1.0, -2.0])
    assert (m.rmse, m.mae, m.mape) == (0.0, 0.0, 0.0)


def test_zero_target_reports_its_index():
    with pytest.raises(MetricsError) as info:
        metrics([1.0, 1.0, 2.0], [1.0, 0.0, 2.0])
    assert info.value.index == 1


def test_zero_targets_can_be_skipped_from_mape():
    m = metrics([2.0, 0.5, 2.0], [1.0, 0.0, 2.0], skip_zero_targets=True)
    assert m.mape == pytest.approx(50.0)
    assert m.mae == pytest.approx(0.5)
    assert math.isnan(metrics([1.0], [0.0], skip_zero_targets=True).mape)


def test_metrics_length_mismatch():
    with pytest.raises(DimensionMismatchError):
        metrics([1.0, 2.0], [1.0])
    with pytest.raises(DimensionMismatchError):
        metrics([], [])


def test_independent_columns_drops_simplex_member():
    rng = np.random.default_rng(4)
    shares = rng.dirichlet(np.ones(3), size=40)
    X = np.column_stack([rng.normal(size=40), shares])
    np.testing.assert_array_equal(independent_columns(X), [0, 1, 2])
    np.testing.assert_array_equal(independent_columns(np.column_stack([X[:, 0], X[:, 0]])), [0])


def test_metrics_oracle_and_rmse_dominates_mae():
    m = metrics([2.0, 2.0, 2.0], [1.0, 2.0, 4.0])
    assert m.rmse == pytest.approx(math.sqrt(5 / 3), abs=1e-9)
    assert m.mae == pytest.approx(1.0, abs=1e-9)
    assert m.mape == pytest.approx(50.0, abs=1e-9)
    rng = np.random.default_rng(5)
    for _ in range(1000):
        n = int(rng.integers(1, 20))
        fuzz = metrics(rng.normal(size=n), rng.uniform(0.5, 2.0, size=n))
        assert fuzz.rmse >= fuzz.mae - 1e-12
