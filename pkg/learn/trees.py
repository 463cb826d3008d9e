# learn/trees.py
"""
CART regression trees and random forests.

`fit_tree` runs an exhaustive split search over (feature, threshold) in index order,
so equally good splits go to the lower feature index, then the lower threshold.
Forests and boosting weak learners use scikit-learn's splitter; its fitted topology
is copied into RegressionTree so every model predicts, dumps and reloads the same way.
"""
from __future__ import annotations

import logging
from typing import List, Optional, Tuple

import numpy as np
from sklearn.ensemble import RandomForestRegressor
from sklearn.tree import DecisionTreeRegressor

from configs import settings
from core.errors import DimensionMismatchError, InputDataError, InsufficientDataError
from schemas.models import LEAF, ForestModel, RegressionTree, TreeParams

logger = logging.getLogger(__name__)

# relative to the node's sum of squares
_MIN_GAIN = 1e-12


def _as_xy(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim != 2 or X.shape[0] == 0:
        raise InsufficientDataError("empty training input")
    if X.shape[0] != y.shape[0]:
        raise DimensionMismatchError(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
    return X, y


def tree_from_estimator(est: DecisionTreeRegressor, params: TreeParams) -> RegressionTree:
    t = est.tree_
    left = t.children_left.astype(np.int64)
    leaf = left == LEAF
    return RegressionTree(
        children_left=left,
        children_right=t.children_right.astype(np.int64),
        feature=np.where(leaf, LEAF, t.feature).astype(np.int64),
        threshold=np.where(leaf, 0.0, t.threshold).astype(float),
        value=t.value[:, 0, 0].astype(float),
        n_node_samples=t.n_node_samples.astype(np.int64),
        n_features=int(est.n_features_in_),
        params=params,
        feature_importances=np.asarray(est.feature_importances_, dtype=float),
    )


def best_split(X: np.ndarray, y: np.ndarray, min_samples_leaf: int = 1) -> Optional[Tuple[int, float, float]]:
    """
    Best variance-reduction split of one node as (feature, threshold, sse_reduction),
    or None when no admissible split reduces the sum of squares.

    Candidates are midpoints between consecutive distinct values. The scan is
    feature-major and keeps the first maximum.
    """
    n = X.shape[0]
    if n < 2 * min_samples_leaf or n < 2:
        return None
    yc = y - y.mean()
    sse = float(yc @ yc)
    if sse <= 0.0:
        return None
    order = np.argsort(X, axis=0, kind="stable")
    xs = np.take_along_axis(X, order, axis=0)
    left_sum = np.cumsum(yc[order], axis=0)[:-1]
    n_left = np.arange(1, n, dtype=float)[:, None]
    # yc sums to zero, so the right sum is -left_sum
    gain = left_sum ** 2 / n_left + left_sum ** 2 / (n - n_left)
    valid = (xs[1:] > xs[:-1]) & (n_left >= min_samples_leaf) & (n - n_left >= min_samples_leaf)
    gain = np.where(valid, gain, -np.inf)

    flat = gain.T.ravel()
    pos = int(np.argmax(flat))
    best = float(flat[pos])
    if not best > _MIN_GAIN * sse:
        return None
    feature, i = divmod(pos, n - 1)
    lo, hi = xs[i, feature], xs[i + 1, feature]
    threshold = lo + (hi - lo) / 2.0
    if threshold >= hi:
        threshold = lo
    return int(feature), float(threshold), best


def fit_tree(X, y, params: Optional[TreeParams] = None, seed: int = 0) -> RegressionTree:
    """
    Greedy variance-reduction CART with ties broken by lower feature index, then
    lower threshold. The search is exhaustive, so the result does not depend on
    `seed`; the argument keeps the fitter signature shared with the ensembles.
    """
    X, y = _as_xy(X, y)
    params = params or TreeParams()
    # thresholds sit between float32 values, matching predict_tree
    X = X.astype(np.float32).astype(float)
    n, k = X.shape
    max_depth = params.max_depth if params.max_depth is not None else n

    left: List[int] = [LEAF]
    right: List[int] = [LEAF]
    feature: List[int] = [LEAF]
    threshold: List[float] = [0.0]
    value: List[float] = [float(y.mean())]
    counts: List[int] = [n]
    importances = np.zeros(k)

    stack = [(0, np.arange(n), 0)]
    while stack:
        node, rows, depth = stack.pop()
        if depth >= max_depth or rows.size < params.min_samples_split:
            continue
        split = best_split(X[rows], y[rows], params.min_samples_leaf)
        if split is None:
            continue
        j, thr, gain = split
        goes_left = X[rows, j] <= thr
        children = []
        for part in (rows[goes_left], rows[~goes_left]):
            children.append(len(value))
            left.append(LEAF)
            right.append(LEAF)
            feature.append(LEAF)
            threshold.append(0.0)
            value.append(float(y[part].mean()))
            counts.append(int(part.size))
        left[node], right[node] = children
        feature[node], threshold[node] = j, thr
        importances[j] += gain
        stack.append((children[1], rows[~goes_left], depth + 1))
        stack.append((children[0], rows[goes_left], depth + 1))

    total = importances.sum()
    tree = RegressionTree(
        children_left=np.asarray(left, dtype=np.int64),
        children_right=np.asarray(right, dtype=np.int64),
        feature=np.asarray(feature, dtype=np.int64),
        threshold=np.asarray(threshold, dtype=float),
        value=np.asarray(value, dtype=float),
        n_node_samples=np.asarray(counts, dtype=np.int64),
        n_features=k,
        params=params,
        feature_importances=importances / total if total > 0 else importances,
    )
    logger.debug("Fitted tree: %d nodes, %d leaves.", tree.n_nodes, tree.n_leaves)
    return tree


def fit_engine_tree(X, y, params: Optional[TreeParams] = None, seed: int = 0) -> RegressionTree:
    """CART through scikit-learn's splitter; features are visited in a seeded order."""
    X, y = _as_xy(X, y)
    params = params or TreeParams()
    est = DecisionTreeRegressor(
        criterion="squared_error",
        max_depth=params.max_depth,
        min_samples_split=params.min_samples_split,
        min_samples_leaf=params.min_samples_leaf,
        random_state=seed,
    )
    est.fit(X, y)
    return tree_from_estimator(est, params)


def predict_tree(tree: RegressionTree, X) -> np.ndarray:
    # float32 comparisons; every threshold lies between two float32 values
    X32 = np.asarray(X, dtype=np.float32)
    if X32.ndim == 1:
        X32 = X32[None, :]
    if X32.shape[1] != tree.n_features:
        raise DimensionMismatchError(f"tree expects {tree.n_features} features, got {X32.shape[1]}")
    node = np.zeros(X32.shape[0], dtype=np.int64)
    active = tree.children_left[node] != LEAF
    while active.any():
        rows = np.flatnonzero(active)
        nd = node[rows]
        go_left = X32[rows, tree.feature[nd]] <= tree.threshold[nd]
        node[rows] = np.where(go_left, tree.children_left[nd], tree.children_right[nd])
        active = tree.children_left[node] != LEAF
    return tree.value[node].astype(float)


def fit_random_forest(
    X,
    y,
    n_trees: int = settings.RF_N_TREES,
    feature_fraction: float = settings.RF_FEATURE_FRACTION,
    params: Optional[TreeParams] = None,
    seed: int = 0,
    n_jobs: Optional[int] = None,
) -> ForestModel:
    """Bootstrap (same size, with replacement) per tree and per-split feature subsampling."""
    X, y = _as_xy(X, y)
    if n_trees < 1:
        raise InputDataError(f"n_trees must be >= 1, got {n_trees}")
    if not 0 < feature_fraction <= 1:
        raise InputDataError(f"feature_fraction must be in (0, 1], got {feature_fraction}")
    params = params or TreeParams()
    est = RandomForestRegressor(
        n_estimators=n_trees,
        max_features=feature_fraction,
        max_depth=params.max_depth,
        min_samples_split=params.min_samples_split,
        min_samples_leaf=params.min_samples_leaf,
        bootstrap=True,
        random_state=seed,
        n_jobs=n_jobs,
    )
    est.fit(X, y)
    trees = [tree_from_estimator(e, params) for e in est.estimators_]
    seeds = [int(e.random_state) for e in est.estimators_]
    logger.debug("Fitted forest of %d trees on %d rows.", n_trees, X.shape[0])
    return ForestModel(trees=trees, tree_seeds=seeds, feature_fraction=feature_fraction, n_features=X.shape[1])


def predict_forest(forest: ForestModel, X) -> np.ndarray:
    return np.mean([predict_tree(t, X) for t in forest.trees], axis=0)
