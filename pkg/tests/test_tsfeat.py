import numpy as np
import pandas as pd
import pytest

from core.errors import CollinearityError, DateAlignmentError, InputDataError
from pipeline.tsfeat import (
    align_panel,
    build_lag_design,
    fit_var,
    raw_price_forecast,
    select_lag,
    select_lags,
    sic_score,
    transform_series,
)
from schemas.indicators import IndicatorPanel, LagChoice, LagSelection, TopicIntensitySeries, VarFit


def _topics(dates, values):
    idx = pd.DatetimeIndex(pd.to_datetime(dates), name="date")
    frame = pd.DataFrame({"topic1": values}, index=idx)
    return TopicIntensitySeries(values=frame, counts=pd.Series(1, index=idx))


def test_weekend_news_folds_into_monday():
    # 2021-01-04 is a Monday
    days = pd.date_range("2021-01-04", periods=7, freq="D")
    price = pd.Series(np.arange(5, dtype=float), index=days[:5])
    news = pd.date_range("2021-01-02", periods=9, freq="D")
    topics = _topics(news, np.arange(9, dtype=float))
    panel = align_panel(price, topics)
    # Saturday 0, Sunday 1, Monday 2 -> Monday 1.0
    assert panel.frame.loc["2021-01-04", "topic1"] == pytest.approx(1.0)
    assert panel.frame.loc["2021-01-05", "topic1"] == pytest.approx(3.0)
    assert list(panel.frame.columns) == ["price", "topic1"]


def test_identical_calendars_join_and_gap_is_forward_filled():
    days = pd.bdate_range("2021-01-04", periods=5)
    price = pd.Series([1.0, 2.0, 3.0, 4.0, 5.0], index=days)
    topics = _topics(days, [0.1, 0.2, 0.3, 0.4, 0.5])
    panel = align_panel(price, topics)
    np.testing.assert_allclose(panel.frame["topic1"], [0.1, 0.2, 0.3, 0.4, 0.5])

    gap = _topics(days.delete(2), [0.1, 0.2, 0.4, 0.5])
    panel = align_panel(price, gap)
    assert panel.frame["topic1"].iloc[2] == pytest.approx(0.2)


def test_disjoint_dates_fail_alignment():
    price = pd.Series([1.0, 2.0], index=pd.bdate_range("2020-01-06", periods=2))
    topics = _topics(["2021-01-04"], [0.5])
    with pytest.raises(DateAlignmentError):
        align_panel(price, topics)


def _price_panel(values, start="2021-01-04"):
    idx = pd.bdate_range(start, periods=len(values), name="date")
    price = pd.Series(values, index=idx, dtype=float, name="price")
    return IndicatorPanel(frame=price.to_frame(), raw_price=price)


def test_difference_then_scale():
    panel = transform_series(_price_panel([10, 12, 11]), train_end="2021-01-06")
    np.testing.assert_allclose(panel.frame["dprice"], [1.0, 0.0])
    assert panel.price_column == "dprice"
    # inverse scaling and raw reconstruction
    np.testing.assert_allclose(panel.inverse_scale("dprice", [1.0, 0.0]), [2.0, -1.0])
    raw = raw_price_forecast(panel, panel.index, [1.0, 0.0])
    np.testing.assert_allclose(raw, [12.0, 11.0])


def test_scaling_uses_train_range_without_clamping():
    panel = transform_series(_price_panel([0.0, 1.0, 0.5, 3.0]), train_end="2021-01-06", difference_price=False)
    np.testing.assert_allclose(panel.frame["price"].iloc[:3], [0.0, 1.0, 0.5])
    assert panel.frame["price"].iloc[3] == pytest.approx(3.0)


def test_train_end_outside_index_rejected():
    with pytest.raises(InputDataError):
        transform_series(_price_panel([1, 2, 3]), train_end="2030-01-01")


def _simulate_var(coefs, n, seed):
    rng = np.random.default_rng(seed)
    p = len(coefs)
    y = np.zeros((n + 100, 2))
    for t in range(p, n + 100):
        y[t] = sum(coefs[j] @ y[t - j - 1] for j in range(p)) + rng.normal(size=2)
    return y[100:]


def test_fit_var_recovers_coefficients():
    A1 = np.array([[0.5, 0.0], [0.0, 0.5]])
    fit = fit_var(_simulate_var([A1], 5000, seed=0), p=1)
    np.testing.assert_allclose(fit.coefs[0], A1, atol=0.05)

    noise = np.random.default_rng(1).normal(size=(5000, 2))
    np.testing.assert_allclose(fit_var(noise, 1).coefs[0], 0.0, atol=0.05)


def test_fit_var_constant_series_is_singular():
    y = np.column_stack([np.ones(50), np.random.default_rng(0).normal(size=50)])
    with pytest.raises(CollinearityError):
        fit_var(y, 1)


def test_sic_plug_in_values():
    fit = VarFit(coefs=np.zeros((1, 2, 2)), intercept=np.zeros(2), sigma=np.eye(2), nobs=100, p=1)
    assert sic_score(fit) == pytest.approx(np.log(100) / 100 * 4, abs=1e-5)
    assert sic_score(fit) == pytest.approx(0.18421, abs=1e-5)
    shrunk = VarFit(coefs=fit.coefs, intercept=fit.intercept, sigma=np.eye(2) / np.sqrt(10), nobs=100, p=1)
    assert sic_score(fit) - sic_score(shrunk) == pytest.approx(np.log(10))
    zero = VarFit(coefs=np.zeros((0, 2, 2)), intercept=np.zeros(2), sigma=np.diag([2.0, 3.0]), nobs=100, p=0)
    assert sic_score(zero) == pytest.approx(np.log(6.0))


def test_select_lag_finds_planted_order():
    A1 = np.array([[0.2, 0.1], [0.0, 0.2]])
    A3 = np.array([[0.0, 0.5], [0.0, 0.4]])
    hits = 0
    for seed in range(10):
        y = _simulate_var([A1, np.zeros((2, 2)), A3], 2000, seed)
        hits += select_lag(y[:, 0], y[:, 1], p_max=5).lag == 3
    assert hits >= 8


def test_select_lag_with_single_candidate():
    rng = np.random.default_rng(0)
    assert select_lag(rng.normal(size=200), rng.normal(size=200), p_max=1).lag == 1


def _lag_panel(n=10):
    idx = pd.bdate_range("2021-01-04", periods=n, name="date")
    frame = pd.DataFrame({"dprice": np.arange(n, dtype=float), "topic1": 100 + np.arange(n, dtype=float)}, index=idx)
    return IndicatorPanel(frame=frame, raw_price=frame["dprice"], price_column="dprice", differenced=True)


def _lags(py, px):
    return LagSelection({"dprice": LagChoice("dprice", py, {py: 0.0}), "topic1": LagChoice("topic1", px, {px: 0.0})})


def test_lag_design_shape_and_labels():
    design = build_lag_design(_lag_panel(10), _lags(2, 4), h=1)
    assert design.X.shape == (6, 6)
    assert design.columns == ["dprice(t-1)", "dprice(t-2)", "topic1(t-1)", "topic1(t-2)", "topic1(t-3)", "topic1(t-4)"]
    # first target row is position 4; its dprice(t-1) is position 3
    assert design.y[0] == 4.0
    assert design.X[0, 0] == 3.0
    assert design.X[0, 5] == 100.0


def test_lag_design_horizon_shift():
    design = build_lag_design(_lag_panel(10), _lags(1, 1), h=3)
    assert design.positions[0] == 3
    assert design.columns == ["dprice(t-3)", "topic1(t-3)"]
    np.testing.assert_allclose(design.X[:, 0], design.y - 3)
    assert design.n_rows == 10 - 1 - 3 + 1


def test_select_lags_covers_every_column():
    rng = np.random.default_rng(2)
    idx = pd.bdate_range("2021-01-04", periods=300, name="date")
    frame = pd.DataFrame({"dprice": rng.normal(size=300), "topic1": rng.normal(size=300)}, index=idx)
    panel = IndicatorPanel(frame=frame, raw_price=frame["dprice"], price_column="dprice", differenced=True)
    lags = select_lags(panel, p_max=3)
    assert set(lags.choices) == {"dprice", "topic1"}
    assert {row["series"] for row in lags.to_rows()} == {"dprice", "topic1"}


def test_select_lag_ignores_affine_rescaling():
    A1 = np.array([[0.3, 0.2], [0.0, 0.3]])
    A2 = np.array([[0.0, 0.3], [0.1, 0.2]])
    y = _simulate_var([A1, A2], 800, 5)
    base = select_lag(y[:, 0], y[:, 1], p_max=4)
    scaled = select_lag(50.0 + 3.0 * y[:, 0], -2.0 + 0.01 * y[:, 1], p_max=4)
    assert scaled.lag == base.lag
    shift = np.log((3.0 * 0.01) ** 2)
    for p, value in base.sic_table.items():
        assert scaled.sic_table[p] == pytest.approx(value + shift, abs=1e-8)


def test_sic_table_is_reproducible():
    y = _simulate_var([np.array([[0.4, 0.1], [0.0, 0.3]])], 500, 6)
    first = select_lag(y[:, 0], y[:, 1], p_max=5)
    second = select_lag(y[:, 0].copy(), y[:, 1].copy(), p_max=5)
    assert first.sic_table == second.sic_table
    assert first.lag == second.lag


def test_inverse_scaling_recovers_in_range_values():
    rng = np.random.default_rng(7)
    idx = pd.bdate_range("2021-01-04", periods=60, name="date")
    frame = pd.DataFrame({"price": 50 + np.cumsum(rng.normal(size=60)), "topic1": rng.uniform(size=60)}, index=idx)
    panel = transform_series(IndicatorPanel(frame=frame, raw_price=frame["price"]), train_end=idx[39])
    train = panel.frame.loc[:idx[39]]
    np.testing.assert_allclose(panel.inverse_scale("topic1", train["topic1"]), frame.loc[train.index, "topic1"],
                               rtol=0, atol=1e-12)
    changes = frame["price"].diff().loc[train.index]
    np.testing.assert_allclose(panel.inverse_scale("dprice", train["dprice"]), changes, rtol=0, atol=1e-12)


def test_every_lag_design_row_looks_only_backwards():
    n = 12
    idx = pd.bdate_range("2021-01-04", periods=n, name="date")
    # each value encodes the row it came from
    frame = pd.DataFrame({"dprice": np.arange(n, dtype=float), "topic1": 1000 + np.arange(n, dtype=float)}, index=idx)
    panel = IndicatorPanel(frame=frame, raw_price=frame["dprice"], price_column="dprice", differenced=True)
    for h in (1, 2, 3):
        design = build_lag_design(panel, _lags(2, 4), h=h)
        assert design.n_rows == n - 4 - h + 1
        for r, target_date in enumerate(design.dates):
            for c, label in enumerate(design.columns):
                name, j = label[:-1].split("(t-")
                source_row = int(design.X[r, c] - (1000 if name == "topic1" else 0))
                feature_date = idx[source_row]
                assert feature_date < target_date
                assert idx.get_loc(target_date) - idx.get_loc(feature_date) == int(j) >= h
