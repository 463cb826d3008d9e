# learn/estimators.py
"""
Model dispatch by ModelSpec kind, and a scikit-learn compatible wrapper so the
fitters plug into sklearn's recursive feature elimination.
"""
from __future__ import annotations

from typing import Any, Dict, Optional, Union

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin

from configs import settings
from core.errors import DimensionMismatchError, InputDataError
from learn.adaboost_rt import fit_adaboost_rt, predict_adaboost_rt
from learn.linear import fit_linear, predict_linear
from learn.trees import fit_random_forest, fit_tree, predict_forest, predict_tree
from schemas.models import AdaboostRtModel, ForestModel, LinearModel, RegressionTree, TreeParams
from schemas.run_config import ModelSpec

FittedModel = Union[RegressionTree, ForestModel, AdaboostRtModel, LinearModel]

_TREE_KEYS = ("max_depth", "min_samples_split", "min_samples_leaf")


def _tree_params(params: Dict[str, Any]) -> TreeParams:
    return TreeParams(**{k: params[k] for k in _TREE_KEYS if k in params})


def fit_model(spec: ModelSpec, X, y, seed: int = 0, n_jobs: Optional[int] = None) -> FittedModel:
    params = spec.params
    if spec.kind == "tree":
        return fit_tree(X, y, _tree_params(params), seed=seed)
    if spec.kind == "rf":
        return fit_random_forest(
            X, y,
            n_trees=int(params.get("n_trees", settings.RF_N_TREES)),
            feature_fraction=float(params.get("feature_fraction", settings.RF_FEATURE_FRACTION)),
            params=_tree_params(params),
            seed=seed,
            n_jobs=n_jobs,
        )
    if spec.kind == "ada":
        ada_keys = ("n_estimators", "phi", "n_power", "learning_rate")
        return fit_adaboost_rt(X, y, base_params=_tree_params(params), seed=seed,
                               **{k: params[k] for k in ada_keys if k in params})
    if spec.kind == "arx":
        return fit_linear(X, y)
    raise InputDataError(f"unknown model kind '{spec.kind}'")


def predict(model: FittedModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    n_features = model.n_features
    if X.shape[1] != n_features:
        raise DimensionMismatchError(f"model expects {n_features} features, got {X.shape[1]}")
    if isinstance(model, RegressionTree):
        out = predict_tree(model, X)
    elif isinstance(model, ForestModel):
        out = predict_forest(model, X)
    elif isinstance(model, AdaboostRtModel):
        out = predict_adaboost_rt(model, X)
    elif isinstance(model, LinearModel):
        out = predict_linear(model, X)
    else:
        raise InputDataError(f"cannot predict with {type(model).__name__}")
    return np.asarray(out, dtype=float)


class SpecRegressor(RegressorMixin, BaseEstimator):
    """Exposes feature_importances_ (impurity for trees, |standardized coef| for arx)."""

    def __init__(self, kind: str = "tree", params: Optional[Dict[str, Any]] = None, seed: int = 0):
        self.kind = kind
        self.params = params
        self.seed = seed

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        spec = ModelSpec(name=self.kind, kind=self.kind, params=dict(self.params or {}))
        self.model_ = fit_model(spec, X, y, seed=self.seed)
        self.n_features_in_ = X.shape[1]
        self.feature_importances_ = np.asarray(self.model_.feature_importances, dtype=float)
        return self

    def predict(self, X):
        return predict(self.model_, X)
