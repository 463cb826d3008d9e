# schemas/models.py
"""
Fitted regression models. All are plain data; fitting lives in learn/.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List

import numpy as np

LEAF = -1


@dataclass(frozen=True)
class TreeParams:
    max_depth: int | None = None
    min_samples_split: int = 2
    min_samples_leaf: int = 1

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class RegressionTree:
    """
    Array-encoded binary tree. Node i is a leaf when children_left[i] == LEAF;
    otherwise rows with X[:, feature[i]] <= threshold[i] go left.
    """
    children_left: np.ndarray
    children_right: np.ndarray
    feature: np.ndarray
    threshold: np.ndarray
    value: np.ndarray
    n_node_samples: np.ndarray
    n_features: int
    params: TreeParams = field(default_factory=TreeParams)
    feature_importances: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def n_nodes(self) -> int:
        return int(self.children_left.shape[0])

    @property
    def n_leaves(self) -> int:
        return int(np.sum(self.children_left == LEAF))


@dataclass(frozen=True)
class ForestModel:
    trees: List[RegressionTree]
    tree_seeds: List[int]
    feature_fraction: float
    n_features: int

    @property
    def feature_importances(self) -> np.ndarray:
        return np.mean([t.feature_importances for t in self.trees], axis=0)


@dataclass(frozen=True)
class AdaboostRtModel:
    learners: List[RegressionTree]
    log_weights: List[float]  # ln(1/beta_t) per retained learner
    phi: float
    n_power: int
    learning_rate: float
    n_estimators: int
    n_features: int
    error_rates: List[float] = field(default_factory=list)
    weight_sums: List[float] = field(default_factory=list)

    @property
    def feature_importances(self) -> np.ndarray:
        w = np.asarray(self.log_weights, dtype=float)
        imps = np.array([t.feature_importances for t in self.learners])
        return (w[:, None] * imps).sum(axis=0) / w.sum()


@dataclass(frozen=True)
class LinearModel:
    coef: np.ndarray
    intercept: float
    feature_scale: np.ndarray  # per-feature std on the fitting rows

    @property
    def n_features(self) -> int:
        return int(self.coef.shape[0])

    @property
    def feature_importances(self) -> np.ndarray:
        return np.abs(self.coef * self.feature_scale)
