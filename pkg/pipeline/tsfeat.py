# pipeline/tsfeat.py
"""
Panel alignment on the trading calendar, differencing and train-range scaling,
pairwise VAR/SIC lag selection and the lagged regression design.
"""
from __future__ import annotations

import logging
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from configs import settings
from core.errors import (
    CollinearityError,
    ComputationError,
    DateAlignmentError,
    InputDataError,
    InsufficientDataError,
    NotPositiveDefiniteError,
)
from schemas.indicators import (
    ColumnScaling,
    IndicatorPanel,
    LagChoice,
    LagDesign,
    LagSelection,
    SentimentIntensitySeries,
    TopicIntensitySeries,
    VarFit,
)

logger = logging.getLogger(__name__)


def _indicator_frame(topics: Optional[TopicIntensitySeries], sentiment) -> pd.DataFrame:
    parts = []
    if topics is not None:
        parts.append(topics.values)
    if sentiment is not None:
        series = sentiment.si if isinstance(sentiment, SentimentIntensitySeries) else sentiment
        parts.append(series.rename("polarity").to_frame())
    if not parts:
        return pd.DataFrame(index=pd.DatetimeIndex([], name="date"))
    frame = pd.concat(parts, axis=1, join="outer").sort_index()
    frame.index = pd.DatetimeIndex(frame.index, name="date")
    return frame


def align_panel(
    price: pd.Series,
    topics: Optional[TopicIntensitySeries] = None,
    si=None,
    price_column: str = "price",
) -> IndicatorPanel:
    """
    Indexes everything by the price (trading) dates. Indicator values dated after the
    previous trading day and up to a trading day are averaged into that day; trading
    days without any indicator value are forward-filled. The panel spans the trading
    days that received indicator values.
    """
    price = price.sort_index()
    trading = pd.DatetimeIndex(price.index, name="date")
    indicators = _indicator_frame(topics, si)
    if trading.empty:
        raise DateAlignmentError("price series is empty")
    if indicators.empty:
        frame = price.rename(price_column).to_frame()
        frame.index.name = "date"
        return IndicatorPanel(frame=frame, raw_price=price.rename(price_column), price_column=price_column)

    pos = trading.searchsorted(indicators.index, side="left")
    inside = pos < len(trading)
    if not inside.any():
        raise DateAlignmentError("no trading day on or after any indicator date (empty overlap)")
    mapped = indicators[inside].copy()
    mapped.index = trading[pos[inside]]
    folded = mapped.groupby(level=0, sort=True).mean()
    start, end = folded.index[0], folded.index[-1]
    calendar = trading[(trading >= start) & (trading <= end)]
    aligned = folded.reindex(calendar).ffill()
    aligned = aligned.dropna(how="any")
    if aligned.empty:
        raise DateAlignmentError("empty overlap between price and indicator dates")
    frame = pd.concat([price.reindex(aligned.index).rename(price_column), aligned], axis=1)
    frame.index.name = "date"
    n_filled = int(len(calendar) - len(folded.index.intersection(calendar)))
    logger.info("Aligned panel: %d trading days, %d indicator columns, %d forward-filled days.",
                len(frame), aligned.shape[1], n_filled)
    return IndicatorPanel(frame=frame, raw_price=price.rename(price_column), price_column=price_column)


def _lag1_autocorrelation(values: pd.Series) -> float:
    v = values.to_numpy(dtype=float)
    if v.size < 3 or np.std(v[1:]) == 0 or np.std(v[:-1]) == 0:
        return 0.0
    return float(np.corrcoef(v[1:], v[:-1])[0, 1])


def transform_series(panel: IndicatorPanel, train_end, difference_price: bool = True) -> IndicatorPanel:
    """First-differences the price (optional), then min-max scales every column on dates <= train_end."""
    train_end = pd.Timestamp(train_end)
    index = panel.index
    if index.empty or not (index[0] <= train_end <= index[-1]):
        raise InputDataError(f"train_end {train_end.date()} is outside the panel index")
    frame = panel.frame.copy()
    price_col = panel.price_column
    if difference_price:
        if panel.differenced:
            raise InputDataError("panel price is already differenced")
        new_col = f"d{price_col}"
        frame[price_col] = frame[price_col].diff()
        frame = frame.rename(columns={price_col: new_col}).iloc[1:]
        price_col = new_col
    for col in frame.columns:
        if col == price_col and difference_price:
            continue
        rho = _lag1_autocorrelation(frame[col])
        if rho > settings.AUTOCORR_WARNING:
            logger.warning("Column %s has lag-1 autocorrelation %.3f; consider differencing.", col, rho)
    train = frame.loc[:train_end]
    if len(train) < 2:
        raise InsufficientDataError("training range holds fewer than two rows")
    scaling: Dict[str, ColumnScaling] = {}
    for col in frame.columns:
        lo, hi = float(train[col].min()), float(train[col].max())
        if hi - lo <= 0:
            raise ComputationError(f"column {col} is constant on the training range; cannot scale")
        scaling[col] = ColumnScaling(minimum=lo, maximum=hi)
        frame[col] = (frame[col] - lo) / (hi - lo)
    logger.info("Transformed panel: differenced=%s, %d rows, train_end=%s.",
                difference_price, len(frame), train_end.date())
    return IndicatorPanel(
        frame=frame,
        raw_price=panel.raw_price,
        price_column=price_col,
        differenced=difference_price or panel.differenced,
        scaling=scaling,
        train_end=train_end,
    )


def raw_price_forecast(panel: IndicatorPanel, dates: pd.DatetimeIndex, scaled_values) -> np.ndarray:
    """
    Maps scaled target values back to price levels. Differenced targets are added to
    the realized price of the previous trading day for every horizon, so for h > 1 the
    anchor is later than the forecast origin and raw-scale errors are the scaled errors
    times the training span of the change.
    """
    change = panel.inverse_scale(panel.price_column, scaled_values)
    if not panel.differenced:
        return change
    previous = panel.raw_price.sort_index().shift(1).reindex(dates).to_numpy(dtype=float)
    return previous + change


def fit_var(y, p: int) -> VarFit:
    """Equation-by-equation OLS with an intercept; sigma = residual cross-product / (T - p)."""
    data = np.asarray(y, dtype=float)
    if data.ndim == 1:
        data = data[:, None]
    t_len, k = data.shape
    if p < 0:
        raise InputDataError(f"lag order must be >= 0, got {p}")
    n = t_len - p
    if n <= k * k * p + k + 1:
        raise InsufficientDataError(f"VAR({p}) with K={k} needs more than {k * k * p + k + 1} effective rows, got {n}")
    Z = np.ones((n, 1 + k * p))
    for j in range(1, p + 1):
        Z[:, 1 + (j - 1) * k:1 + j * k] = data[p - j:t_len - j]
    Y = data[p:]
    if np.linalg.matrix_rank(Z) < Z.shape[1]:
        raise CollinearityError(f"singular regressor cross-product in VAR({p}) (collinear or constant series)")
    B, *_ = np.linalg.lstsq(Z, Y, rcond=None)
    resid = Y - Z @ B
    sigma = resid.T @ resid / n
    coefs = np.stack([B[1 + (j - 1) * k:1 + j * k].T for j in range(1, p + 1)]) if p else np.zeros((0, k, k))
    return VarFit(coefs=coefs, intercept=B[0].copy(), sigma=sigma, nobs=n, p=p)


def sic_score(fit: VarFit, N: Optional[int] = None, K: Optional[int] = None, p: Optional[int] = None) -> float:
    """SIC(p) = ln|sigma(p)| + (ln N / N) K^2 p"""
    n = fit.nobs if N is None else N
    k = fit.k if K is None else K
    lag = fit.p if p is None else p
    sign, logdet = np.linalg.slogdet(fit.sigma)
    if sign <= 0 or not np.isfinite(logdet):
        raise NotPositiveDefiniteError("residual covariance is not positive definite")
    return float(logdet + np.log(n) / n * k * k * lag)


def _select(data: np.ndarray, p_max: int, name: str) -> LagChoice:
    if p_max < 1:
        raise InputDataError(f"p_max must be >= 1, got {p_max}")
    table: Dict[int, float] = {}
    for p in range(1, p_max + 1):
        fit = fit_var(data[p_max - p:], p)
        table[p] = sic_score(fit)
    chosen = min(table, key=lambda q: (table[q], q))
    logger.info("Lag selection for %s: p=%d (SIC %.4f).", name, chosen, table[chosen])
    return LagChoice(series=name, lag=chosen, sic_table=table)


def select_lag(price_col, exog_col, p_max: int = settings.P_MAX, name: str = "exog") -> LagChoice:
    """Bivariate VAR(p), p = 1..p_max on a common sample trimmed to p_max; argmin SIC."""
    data = np.column_stack([np.asarray(price_col, dtype=float), np.asarray(exog_col, dtype=float)])
    return _select(data, p_max, name)


def select_own_lag(price_col, p_max: int = settings.P_MAX, name: str = "price") -> LagChoice:
    """Univariate autoregression (K = 1) lag choice for the target series."""
    return _select(np.asarray(price_col, dtype=float)[:, None], p_max, name)


def select_lags(
    panel: IndicatorPanel,
    p_max: int = settings.P_MAX,
    columns: Optional[Sequence[str]] = None,
    end=None,
) -> LagSelection:
    """Own lag for the target plus a pairwise lag per exogenous column, on rows dated <= end."""
    frame = panel.frame if end is None else panel.frame.loc[:pd.Timestamp(end)]
    target = frame[panel.price_column].to_numpy(dtype=float)
    choices = {panel.price_column: select_own_lag(target, p_max, panel.price_column)}
    for col in (panel.exogenous_columns if columns is None else columns):
        choices[col] = select_lag(target, frame[col].to_numpy(dtype=float), p_max, col)
    return LagSelection(choices=choices)


def build_lag_design(panel: IndicatorPanel, lags: LagSelection, h: int, columns: Optional[List[str]] = None) -> LagDesign:
    """
    Target at row t; features target(t-h)..target(t-h-p_y+1) then, per exogenous column,
    col(t-h)..col(t-h-p_x+1). Labels are `name(t-j)` with j counted from the target date.
    """
    if h < 1:
        raise InputDataError(f"horizon must be >= 1, got {h}")
    price_col = panel.price_column
    if price_col not in lags.choices:
        raise InputDataError(f"no lag chosen for target column {price_col}")
    wanted = [price_col] + [c for c in (columns if columns is not None else panel.exogenous_columns)
                            if c in lags.choices and c != price_col]
    frame = panel.frame
    values = {c: frame[c].to_numpy(dtype=float) for c in wanted}
    t_len = len(frame)
    max_lag = max(lags.lag_of(c) for c in wanted)
    first = max_lag + h - 1
    if first >= t_len:
        raise InsufficientDataError(f"panel of {t_len} rows too short for max lag {max_lag} at horizon {h}")
    positions = np.arange(first, t_len)
    labels: List[str] = []
    sources = []
    cols = []
    for c in wanted:
        for j in range(h, h + lags.lag_of(c)):
            labels.append(f"{c}(t-{j})")
            sources.append((c, j))
            cols.append(values[c][positions - j])
    X = np.column_stack(cols)
    y = values[price_col][positions]
    logger.info("Lag design h=%d: %d rows x %d features.", h, X.shape[0], X.shape[1])
    return LagDesign(
        X=X,
        y=y,
        columns=labels,
        dates=frame.index[positions],
        horizon=h,
        sources=sources,
        positions=positions,
    )
