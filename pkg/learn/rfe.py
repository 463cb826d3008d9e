# learn/rfe.py
"""
Recursive feature elimination over the lag design. One elimination path is computed on
the fitting rows; every prefix size p is refit and scored on a chronological hold-out.
"""
from __future__ import annotations

import logging
from typing import List

import numpy as np
from sklearn.feature_selection import RFE

from configs import settings
from core.errors import InputDataError, InsufficientDataError
from learn.estimators import SpecRegressor, fit_model, predict
from learn.metrics import metrics
from schemas.forecasting import Metrics, RfeResult, RfeRow
from schemas.indicators import LagDesign
from schemas.run_config import ModelSpec

logger = logging.getLogger(__name__)


def chronological_split(n_rows: int, validation_fraction: float):
    if not 0 < validation_fraction < 1:
        raise InputDataError(f"validation_fraction must be in (0, 1), got {validation_fraction}")
    n_val = max(1, int(round(n_rows * validation_fraction)))
    n_fit = n_rows - n_val
    if n_fit < 2:
        raise InsufficientDataError(f"{n_rows} rows leave fewer than two fitting rows for RFE")
    return np.arange(n_fit), np.arange(n_fit, n_rows)


def _scores(table: List[Metrics], normalized: bool) -> np.ndarray:
    grid = np.array([[m.rmse, m.mae, m.mape] for m in table], dtype=float)
    if normalized:
        lo = np.nanmin(grid, axis=0)
        span = np.nanmax(grid, axis=0) - lo
        grid = np.where(span > 0, (grid - lo) / np.where(span > 0, span, 1.0), 0.0)
    return np.nanmean(grid, axis=1)


def pick_size(scores: np.ndarray, tie_tolerance: float = settings.RFE_TIE_TOLERANCE) -> int:
    """
    Index of the smallest subset whose score is within `tie_tolerance` times the
    table's score spread of the minimum.
    """
    lo = float(np.nanmin(scores))
    spread = float(np.nanmax(scores)) - lo
    close = np.flatnonzero(scores <= lo + tie_tolerance * spread)
    return int(close[0])


def rfe_select(
    design: LagDesign,
    spec: ModelSpec,
    seed: int = settings.DEFAULT_SEED,
    validation_fraction: float = settings.RFE_VALIDATION_FRACTION,
    normalized: bool = False,
    tie_tolerance: float = settings.RFE_TIE_TOLERANCE,
) -> RfeResult:
    k = len(design.columns)
    if k < 2:
        raise InputDataError(f"RFE needs at least two features, got {k}")
    fit_rows, val_rows = chronological_split(design.n_rows, validation_fraction)
    X_fit, y_fit = design.X[fit_rows], design.y[fit_rows]
    X_val, y_val = design.X[val_rows], design.y[val_rows]

    selector = RFE(SpecRegressor(kind=spec.kind, params=spec.params, seed=seed),
                   n_features_to_select=1, step=1)
    selector.fit(X_fit, y_fit)
    ranking = np.asarray(selector.ranking_)
    # rank k is eliminated first, rank 1 survives
    elimination = [design.columns[i] for i in np.argsort(-ranking, kind="stable")[:k - 1]]

    table: List[Metrics] = []
    for p in range(1, k + 1):
        keep = np.flatnonzero(ranking <= p)
        model = fit_model(spec, X_fit[:, keep], y_fit, seed=seed)
        table.append(metrics(predict(model, X_val[:, keep]), y_val, skip_zero_targets=True))
    scores = _scores(table, normalized)
    best = pick_size(scores, tie_tolerance)
    best_p = best + 1
    selected = [design.columns[i] for i in np.flatnonzero(ranking <= best_p)]
    rows = [
        RfeRow(p=p, rmse=m.rmse, mae=m.mae, mape=m.mape, mean_score=float(s),
               selected=(p == best_p), eliminations=k - p)
        for p, (m, s) in enumerate(zip(table, scores), start=1)
    ]
    logger.info("RFE %s h=%d: kept %d of %d features (%s score %.5f).",
                spec.name, design.horizon, best_p, k, "normalized" if normalized else "raw", scores[best])
    return RfeResult(
        selected=selected,
        elimination_order=elimination,
        table=rows,
        score_mode="normalized" if normalized else "raw",
    )
