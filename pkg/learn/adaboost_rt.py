# learn/adaboost_rt.py
"""
AdaBoost.RT: boosting for regression with a relative-error threshold phi.
Each round fits a CART tree on a weighted bootstrap, marks instances whose
relative error exceeds phi, and shrinks the weight of the correctly predicted ones.
"""
from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from configs import settings
from core.errors import AllRoundsDiscardedError, InputDataError
from learn.trees import _as_xy, fit_engine_tree, predict_tree
from schemas.models import AdaboostRtModel, TreeParams

logger = logging.getLogger(__name__)


def round_seed(seed: int, round_index: int, attempt: int = 0) -> int:
    return int(np.random.SeedSequence([seed, round_index, attempt]).generate_state(1)[0])


def weighted_bootstrap(weights: np.ndarray, seed: int, round_index: int, attempt: int = 0) -> np.ndarray:
    """m indices drawn with replacement, proportional to weights."""
    rng = np.random.default_rng(round_seed(seed, round_index, attempt))
    m = weights.shape[0]
    return rng.choice(m, size=m, replace=True, p=weights)


def fit_adaboost_rt(
    X,
    y,
    n_estimators: int = settings.ADA_N_ESTIMATORS,
    phi: float = settings.ADA_PHI,
    n_power: int = settings.ADA_POWER,
    learning_rate: float = settings.ADA_LEARNING_RATE,
    base_params: Optional[TreeParams] = None,
    seed: int = 0,
    delta: float = settings.ADA_RELATIVE_DELTA,
    max_retries: int = settings.ADA_MAX_RETRIES,
) -> AdaboostRtModel:
    X, y = _as_xy(X, y)
    if n_estimators < 1:
        raise InputDataError(f"n_estimators must be >= 1, got {n_estimators}")
    if phi <= 0:
        raise InputDataError(f"phi must be > 0, got {phi}")
    if n_power < 1:
        raise InputDataError(f"n_power must be >= 1, got {n_power}")
    params = base_params or TreeParams()
    m = X.shape[0]
    D = np.full(m, 1.0 / m)
    denom = np.maximum(np.abs(y), delta)

    learners, log_weights, error_rates, weight_sums = [], [], [], []
    t, attempt, discarded = 0, 0, 0
    while t < n_estimators:
        sample = weighted_bootstrap(D, seed, t, attempt)
        tree = fit_engine_tree(X[sample], y[sample], params, seed=round_seed(seed, t, attempt))
        wrong = np.abs(predict_tree(tree, X) - y) / denom > phi
        eps = float(D[wrong].sum())
        if wrong.all():
            discarded += 1
            attempt += 1
            logger.debug("AdaBoost.RT round %d discarded (error rate %.3f), attempt %d.", t, eps, attempt)
            if attempt > max_retries:
                logger.warning("AdaBoost.RT stopped at round %d after %d failed attempts.", t, attempt)
                break
            continue
        beta = max(eps ** n_power, settings.ADA_BETA_FLOOR)
        if wrong.any():
            D = np.where(wrong, D, D * beta ** learning_rate)
            D = D / D.sum()
        learners.append(tree)
        log_weights.append(float(np.log(1.0 / beta)))
        error_rates.append(eps)
        weight_sums.append(float(D.sum()))
        t += 1
        attempt = 0

    if not learners:
        raise AllRoundsDiscardedError(f"every AdaBoost.RT round was discarded (phi={phi})")
    logger.info("AdaBoost.RT kept %d learners (%d discarded), mean error rate %.3f.",
                len(learners), discarded, float(np.mean(error_rates)))
    return AdaboostRtModel(
        learners=learners,
        log_weights=log_weights,
        phi=phi,
        n_power=n_power,
        learning_rate=learning_rate,
        n_estimators=n_estimators,
        n_features=X.shape[1],
        error_rates=error_rates,
        weight_sums=weight_sums,
    )


def predict_adaboost_rt(model: AdaboostRtModel, X) -> np.ndarray:
    """Weighted mean of learner outputs with weights ln(1/beta_t)."""
    w = np.asarray(model.log_weights, dtype=float)
    preds = np.array([predict_tree(t, X) for t in model.learners])
    return (w[:, None] * preds).sum(axis=0) / w.sum()
