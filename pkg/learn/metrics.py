# learn/metrics.py
from __future__ import annotations

import logging

import numpy as np

from core.errors import DimensionMismatchError, MetricsError
from schemas.forecasting import Metrics

logger = logging.getLogger(__name__)


def metrics(y_hat, y, skip_zero_targets: bool = False) -> Metrics:
    """RMSE, MAE and MAPE (percent). Zero targets raise unless skipped from MAPE."""
    pred = np.asarray(y_hat, dtype=float).ravel()
    true = np.asarray(y, dtype=float).ravel()
    if pred.shape != true.shape or pred.size == 0:
        raise DimensionMismatchError(f"metrics need equal non-empty lengths, got {pred.size} and {true.size}")
    err = pred - true
    rmse = float(np.sqrt(np.mean(err ** 2)))
    mae = float(np.mean(np.abs(err)))
    zero = true == 0
    if zero.any():
        if not skip_zero_targets:
            raise MetricsError("MAPE undefined for a zero target", index=int(np.flatnonzero(zero)[0]))
        if zero.all():
            logger.warning("Every target is zero; MAPE reported as NaN.")
            return Metrics(rmse=rmse, mae=mae, mape=float("nan"))
        logger.debug("Skipping %d zero targets in MAPE.", int(zero.sum()))
    keep = ~zero
    mape = float(np.mean(np.abs(err[keep] / true[keep])) * 100.0)
    return Metrics(rmse=rmse, mae=mae, mape=mape)
