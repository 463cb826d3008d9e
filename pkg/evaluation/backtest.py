# evaluation/backtest.py
"""
Fixed-origin chronological backtest: select features and fit on rows dated up to
train_end, then predict every later row from its realized lagged inputs.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from configs import settings
from core.errors import InputDataError
from learn.estimators import FittedModel, fit_model, predict
from learn.linear import independent_columns
from learn.metrics import metrics
from learn.rfe import rfe_select
from pipeline.tsfeat import build_lag_design, raw_price_forecast
from schemas.forecasting import ForecastReport, RfeResult
from schemas.indicators import IndicatorPanel, LagDesign, LagSelection
from schemas.run_config import ModelSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HorizonOutcome:
    report: ForecastReport
    model: FittedModel
    rfe: Optional[RfeResult]
    columns: List[str]
    candidates: List[str]


def backtest_horizon(
    panel: IndicatorPanel,
    lags: LagSelection,
    spec: ModelSpec,
    train_end,
    h: int,
    variant: str = "decayed_sentiment",
    seed: int = settings.DEFAULT_SEED,
    normalized: bool = False,
    fingerprint: str = "",
) -> HorizonOutcome:
    design = build_lag_design(panel, lags, h)
    cutoff = pd.Timestamp(train_end)
    train_mask = np.asarray(design.dates <= cutoff)
    n_train, n_test = int(train_mask.sum()), int((~train_mask).sum())
    if n_train < 3 or n_test == 0:
        raise InputDataError(f"train_end {cutoff.date()} gives a degenerate split at h={h} "
                             f"({n_train} train rows, {n_test} test rows)")
    train_idx, test_idx = np.flatnonzero(train_mask), np.flatnonzero(~train_mask)
    if spec.kind == "arx":
        design = _drop_dependent(design, train_idx)
    train_design = _rows(design, train_idx)

    rfe: Optional[RfeResult] = None
    if len(design.columns) >= 2:
        rfe = rfe_select(train_design, spec, seed=seed, normalized=normalized)
        selected = rfe.selected
    else:
        selected = list(design.columns)
    cols = [design.columns.index(c) for c in selected]

    model = fit_model(spec, design.X[train_idx][:, cols], design.y[train_idx], seed=seed)
    y_pred = predict(model, design.X[test_idx][:, cols])
    y_true = design.y[test_idx]
    test_dates = design.dates[test_idx]
    true_raw = raw_price_forecast(panel, test_dates, y_true)
    pred_raw = raw_price_forecast(panel, test_dates, y_pred)

    report = ForecastReport(
        model=spec.name,
        variant=variant,
        horizon=h,
        dates=[d.strftime("%Y-%m-%d") for d in test_dates],
        y_true=[float(v) for v in y_true],
        y_pred=[float(v) for v in y_pred],
        y_true_raw=[float(v) for v in true_raw],
        y_pred_raw=[float(v) for v in pred_raw],
        metrics=metrics(y_pred, y_true, skip_zero_targets=True),
        metrics_raw=metrics(pred_raw, true_raw, skip_zero_targets=True),
        selected_features=list(selected),
        rfe_score_mode=rfe.score_mode if rfe else "none",
        config_fingerprint=fingerprint,
        params={"kind": spec.kind, "seed": seed, "train_end": cutoff.strftime("%Y-%m-%d"), **spec.params},
    )
    logger.info("Backtest %s/%s h=%d: %d test rows, rmse %.5f, %d features.",
                spec.name, variant, h, n_test, report.metrics.rmse, len(selected))
    return HorizonOutcome(report=report, model=model, rfe=rfe, columns=list(selected),
                          candidates=list(design.columns))


def _drop_dependent(design: LagDesign, train_idx: np.ndarray) -> LagDesign:
    # topic shares sum to one, so a full set of topic lags is collinear with the intercept
    keep = independent_columns(design.X[train_idx])
    if len(keep) == len(design.columns):
        return design
    kept = set(keep.tolist())
    dropped = [c for i, c in enumerate(design.columns) if i not in kept]
    logger.info("Dropping %d linearly dependent columns for the linear model: %s", len(dropped), dropped)
    return design.subset([design.columns[i] for i in keep])


def _rows(design: LagDesign, idx: np.ndarray) -> LagDesign:
    return LagDesign(
        X=design.X[idx],
        y=design.y[idx],
        columns=list(design.columns),
        dates=design.dates[idx],
        horizon=design.horizon,
        sources=list(design.sources),
        positions=design.positions[idx],
    )


def backtest(
    panel: IndicatorPanel,
    lags: LagSelection,
    spec: ModelSpec,
    train_end,
    horizons: Sequence[int] = settings.HORIZONS,
    variant: str = "decayed_sentiment",
    seed: int = settings.DEFAULT_SEED,
    normalized: bool = False,
    fingerprint: str = "",
) -> List[ForecastReport]:
    return [
        backtest_horizon(panel, lags, spec, train_end, h, variant=variant, seed=seed,
                         normalized=normalized, fingerprint=fingerprint).report
        for h in horizons
    ]


def aggregate_rows(reports: Sequence[ForecastReport]) -> List[Dict[str, object]]:
    """`model,variant,n_features,h,rmse,mae,mape` plus raw-scale metrics."""
    rows = []
    for r in reports:
        rows.append({
            "model": r.model,
            "variant": r.variant,
            "n_features": len(r.selected_features),
            "h": r.horizon,
            "rmse": r.metrics.rmse,
            "mae": r.metrics.mae,
            "mape": r.metrics.mape,
            "rmse_raw": r.metrics_raw.rmse,
            "mae_raw": r.metrics_raw.mae,
            "mape_raw": r.metrics_raw.mape,
        })
    return rows


def feature_selection_matrix(outcomes: Sequence[HorizonOutcome]) -> pd.DataFrame:
    """One row per candidate feature, one 0/1 column per model__variant__hH."""
    features: List[str] = []
    for o in outcomes:
        features.extend(c for c in o.candidates if c not in features)
    frame = pd.DataFrame(index=pd.Index(features, name="feature"))
    for o in outcomes:
        chosen = set(o.columns)
        frame[o.report.key] = [int(f in chosen) for f in features]
    return frame
