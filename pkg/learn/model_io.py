# learn/model_io.py
"""JSON dumps of fitted models: full tree topology and ensemble weights."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict

import numpy as np

from core.errors import InputDataError
from learn.estimators import FittedModel
from schemas.models import AdaboostRtModel, ForestModel, LinearModel, RegressionTree, TreeParams


def _tree_to_dict(tree: RegressionTree) -> Dict[str, Any]:
    return {
        "children_left": tree.children_left.tolist(),
        "children_right": tree.children_right.tolist(),
        "feature": tree.feature.tolist(),
        "threshold": tree.threshold.tolist(),
        "value": tree.value.tolist(),
        "n_node_samples": tree.n_node_samples.tolist(),
        "n_features": tree.n_features,
        "params": tree.params.to_dict(),
        "feature_importances": tree.feature_importances.tolist(),
    }


def _tree_from_dict(data: Dict[str, Any]) -> RegressionTree:
    return RegressionTree(
        children_left=np.asarray(data["children_left"], dtype=np.int64),
        children_right=np.asarray(data["children_right"], dtype=np.int64),
        feature=np.asarray(data["feature"], dtype=np.int64),
        threshold=np.asarray(data["threshold"], dtype=float),
        value=np.asarray(data["value"], dtype=float),
        n_node_samples=np.asarray(data["n_node_samples"], dtype=np.int64),
        n_features=int(data["n_features"]),
        params=TreeParams(**data["params"]),
        feature_importances=np.asarray(data["feature_importances"], dtype=float),
    )


def model_to_dict(model: FittedModel) -> Dict[str, Any]:
    if isinstance(model, RegressionTree):
        return {"type": "tree", **_tree_to_dict(model)}
    if isinstance(model, ForestModel):
        return {
            "type": "rf",
            "trees": [_tree_to_dict(t) for t in model.trees],
            "tree_seeds": list(model.tree_seeds),
            "feature_fraction": model.feature_fraction,
            "n_features": model.n_features,
        }
    if isinstance(model, AdaboostRtModel):
        return {
            "type": "ada",
            "learners": [_tree_to_dict(t) for t in model.learners],
            "log_weights": list(model.log_weights),
            "phi": model.phi,
            "n_power": model.n_power,
            "learning_rate": model.learning_rate,
            "n_estimators": model.n_estimators,
            "n_features": model.n_features,
            "error_rates": list(model.error_rates),
            "weight_sums": list(model.weight_sums),
        }
    if isinstance(model, LinearModel):
        return {
            "type": "arx",
            "coef": model.coef.tolist(),
            "intercept": model.intercept,
            "feature_scale": model.feature_scale.tolist(),
        }
    raise InputDataError(f"cannot serialize {type(model).__name__}")


def model_from_dict(data: Dict[str, Any]) -> FittedModel:
    kind = data.get("type")
    if kind == "tree":
        return _tree_from_dict(data)
    if kind == "rf":
        return ForestModel(
            trees=[_tree_from_dict(t) for t in data["trees"]],
            tree_seeds=[int(s) for s in data["tree_seeds"]],
            feature_fraction=float(data["feature_fraction"]),
            n_features=int(data["n_features"]),
        )
    if kind == "ada":
        return AdaboostRtModel(
            learners=[_tree_from_dict(t) for t in data["learners"]],
            log_weights=[float(w) for w in data["log_weights"]],
            phi=float(data["phi"]),
            n_power=int(data["n_power"]),
            learning_rate=float(data["learning_rate"]),
            n_estimators=int(data["n_estimators"]),
            n_features=int(data["n_features"]),
            error_rates=[float(e) for e in data.get("error_rates", [])],
            weight_sums=[float(s) for s in data.get("weight_sums", [])],
        )
    if kind == "arx":
        return LinearModel(
            coef=np.asarray(data["coef"], dtype=float),
            intercept=float(data["intercept"]),
            feature_scale=np.asarray(data["feature_scale"], dtype=float),
        )
    raise InputDataError(f"unknown model type '{kind}' in dump")


def dump_model(model: FittedModel, path: str | Path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps(model_to_dict(model), indent=2), encoding="utf-8")
    return p


def load_model(path: str | Path) -> FittedModel:
    p = Path(path)
    if not p.exists():
        raise InputDataError("model dump not found", path=str(p))
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputDataError(f"invalid model JSON: {exc}", path=str(p)) from exc
    return model_from_dict(data)
