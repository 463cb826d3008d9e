# pipeline/validators.py
import logging
from pathlib import Path
from typing import Any, Dict, Optional

from jsonschema import ValidationError, validate

from schemas.run_config import MODEL_KINDS, VARIANTS

logger = logging.getLogger(__name__)

METRICS_SCHEMA = {
    "type": "object",
    "properties": {
        "rmse": {"type": "number"},
        "mae": {"type": "number"},
        "mape": {"type": "number"},
    },
    "required": ["rmse", "mae", "mape"],
}

REPORT_SCHEMA = {
    "type": "object",
    "properties": {
        "model": {"type": "string"},
        "variant": {"enum": list(VARIANTS)},
        "horizon": {"type": "integer", "minimum": 1},
        "dates": {"type": "array", "items": {"type": "string"}},
        "y_true": {"type": "array", "items": {"type": "number"}},
        "y_pred": {"type": "array", "items": {"type": "number"}},
        "y_true_raw": {"type": "array", "items": {"type": "number"}},
        "y_pred_raw": {"type": "array", "items": {"type": "number"}},
        "metrics": METRICS_SCHEMA,
        "metrics_raw": METRICS_SCHEMA,
        "selected_features": {"type": "array", "items": {"type": "string"}},
        "rfe_score_mode": {"enum": ["raw", "normalized", "none"]},
        "config_fingerprint": {"type": "string"},
        "params": {"type": "object"},
    },
    "required": ["model", "variant", "horizon", "dates", "y_true", "y_pred", "metrics", "config_fingerprint"],
}

RUN_CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "min_df": {"type": "integer", "minimum": 1},
        "kappa": {"type": "integer", "minimum": 1},
        "k_range": {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1},
        "alpha": {"type": "number", "minimum": 0},
        "max_iter": {"type": "integer", "minimum": 1},
        "tol": {"type": "number", "minimum": 0},
        "top_n": {"type": "integer", "minimum": 1},
        "tau": {"type": "number", "exclusiveMinimum": 0},
        "p_max": {"type": "integer", "minimum": 1},
        "horizons": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        "models": {"type": "array", "items": {"enum": list(MODEL_KINDS)}, "minItems": 1},
        "variants": {"type": "array", "items": {"enum": list(VARIANTS)}, "minItems": 1},
        "dm_loss": {"enum": ["squared", "absolute"]},
        "rf_trees": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
    },
    "required": ["k_range", "horizons", "models", "variants"],
}


def validate_report_schema(report_dict: Dict[str, Any]):
    try:
        validate(instance=report_dict, schema=REPORT_SCHEMA)
        return True, None
    except ValidationError as e:
        logger.warning("Report schema validation failed: %s", e.message)
        return False, e.message


def validate_run_config_schema(config_dict: Dict[str, Any]):
    try:
        validate(instance=config_dict, schema=RUN_CONFIG_SCHEMA)
        return True, None
    except ValidationError as e:
        logger.warning("Run config validation failed: %s", e.message)
        return False, e.message


def run_input_checks(config_dict: Dict[str, Any], need_headlines: bool = True,
                     need_prices: bool = False) -> Dict[str, Any]:
    issues = []
    ok, err = validate_run_config_schema(config_dict)
    if not ok:
        issues.append(f"config_error: {err}")
    # input files
    for key, needed in (("headlines_path", need_headlines), ("prices_path", need_prices)):
        value: Optional[str] = config_dict.get(key)
        if not needed:
            continue
        if not value:
            issues.append(f"missing_{key}")
        elif not Path(value).exists():
            issues.append(f"not_found_{key}: {value}")
    for key in ("lexicon_path", "stop_words_path"):
        value = config_dict.get(key)
        if value and not Path(value).exists():
            issues.append(f"not_found_{key}: {value}")
    if config_dict.get("train_end") is None and need_prices:
        issues.append("missing_train_end")
    passed = not issues
    logger.info("Input checks completed; passed=%s issues=%s", passed, issues)
    return {"issues": issues, "passed": passed}
