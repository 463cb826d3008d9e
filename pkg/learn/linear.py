# learn/linear.py
"""Autoregressive-with-exogenous baseline: ordinary least squares on the lag design."""
from __future__ import annotations

import logging

import numpy as np

from core.errors import CollinearityError, InsufficientDataError
from learn.trees import _as_xy
from schemas.models import LinearModel

logger = logging.getLogger(__name__)


def fit_linear(X, y) -> LinearModel:
    X, y = _as_xy(X, y)
    n, k = X.shape
    if n <= k + 1:
        raise InsufficientDataError(f"linear fit with {k} features needs more than {k + 1} rows, got {n}")
    Z = np.column_stack([np.ones(n), X])
    if np.linalg.matrix_rank(Z) < Z.shape[1]:
        raise CollinearityError("rank-deficient design in linear fit")
    beta, *_ = np.linalg.lstsq(Z, y, rcond=None)
    logger.debug("Linear fit on %d rows x %d features.", n, k)
    return LinearModel(coef=beta[1:].copy(), intercept=float(beta[0]), feature_scale=X.std(axis=0))


def predict_linear(model: LinearModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    return X @ model.coef + model.intercept


def independent_columns(X) -> np.ndarray:
    """Greedy left-to-right pick of columns that raise the rank of [1, X_kept]."""
    X = np.asarray(X, dtype=float)
    kept = []
    Z = np.ones((X.shape[0], 1))
    rank = 1
    for j in range(X.shape[1]):
        trial = np.column_stack([Z, X[:, j]])
        r = np.linalg.matrix_rank(trial)
        if r > rank:
            Z, rank = trial, r
            kept.append(j)
    return np.asarray(kept, dtype=int)
