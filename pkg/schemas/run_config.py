# schemas/run_config.py
"""
Run configuration: read from a plain `key = value` file, overridden by CLI flags,
fingerprinted into every output.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

from configs import settings
from core.errors import InputDataError

VARIANTS = ("no_text", "raw_sentiment", "decayed_sentiment")
MODEL_KINDS = ("tree", "rf", "ada", "arx")


@dataclass
class ModelSpec:
    name: str
    kind: str
    params: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def default_model_specs(names: List[str]) -> List[ModelSpec]:
    specs = []
    for name in names:
        if name == "rf":
            specs.append(ModelSpec("rf", "rf", {"n_trees": settings.RF_N_TREES,
                                                "feature_fraction": settings.RF_FEATURE_FRACTION}))
        elif name == "ada":
            specs.append(ModelSpec("ada", "ada", {"n_estimators": settings.ADA_N_ESTIMATORS,
                                                  "phi": settings.ADA_PHI,
                                                  "n_power": settings.ADA_POWER,
                                                  "learning_rate": settings.ADA_LEARNING_RATE}))
        elif name == "arx":
            specs.append(ModelSpec("arx", "arx", {}))
        elif name == "tree":
            specs.append(ModelSpec("tree", "tree", {}))
        else:
            raise InputDataError(f"unknown model '{name}' (expected one of {', '.join(MODEL_KINDS)})")
    return specs


def _parse_k_range(text: str) -> List[int]:
    text = str(text).strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",") if v.strip()]


def _parse_int_list(text: str) -> List[int]:
    return [int(v) for v in str(text).split(",") if v.strip()]


def _parse_str_list(text: str) -> List[str]:
    return [v.strip() for v in str(text).split(",") if v.strip()]


@dataclass
class RunConfig:
    headlines_path: Optional[str] = None
    prices_path: Optional[str] = None
    lexicon_path: str = str(settings.LEXICON_PATH)
    stop_words_path: str = str(settings.STOP_WORDS_PATH)
    output_dir: str = "output"
    date_column: str = "date"
    text_column: str = "headline"
    price_name: str = "price"
    min_df: int = settings.MIN_DF
    stem: bool = False
    kappa: int = settings.KAPPA
    k_range: List[int] = field(default_factory=lambda: list(range(settings.K_MIN, settings.K_MAX + 1)))
    alpha: float = settings.ALPHA
    max_iter: int = settings.SEANMF_MAX_ITER
    tol: float = settings.SEANMF_TOL
    top_n: int = settings.TOP_N_KEYWORDS
    fit_embedding: bool = False
    tau: float = settings.TAU
    p_max: int = settings.P_MAX
    difference_price: bool = True
    horizons: List[int] = field(default_factory=lambda: list(settings.HORIZONS))
    train_end: Optional[str] = None
    models: List[str] = field(default_factory=lambda: list(settings.DEFAULT_MODELS))
    variants: List[str] = field(default_factory=lambda: list(VARIANTS))
    rfe_normalized: bool = False
    dm_loss: str = settings.DM_LOSS
    dm_baseline: Optional[str] = None
    rf_trees: int = settings.RF_N_TREES
    seed: int = settings.DEFAULT_SEED

    _PARSERS = {
        "k_range": _parse_k_range,
        "horizons": _parse_int_list,
        "models": _parse_str_list,
        "variants": _parse_str_list,
    }

    def model_specs(self) -> List[ModelSpec]:
        specs = default_model_specs(self.models)
        for spec in specs:
            if spec.kind == "rf":
                spec.params["n_trees"] = self.rf_trees
        return specs

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def fingerprint(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, default=str)
        return hashlib.sha256(payload.encode()).hexdigest()

    def update(self, values: Dict[str, Any]) -> "RunConfig":
        known = {f.name: f for f in fields(self)}
        for key, raw in values.items():
            if raw is None:
                continue
            key = key.replace("-", "_")
            if key not in known:
                raise InputDataError(f"unknown config key '{key}'")
            setattr(self, key, self._coerce(key, raw))
        return self

    def _coerce(self, key: str, raw: Any) -> Any:
        if not isinstance(raw, str):
            return raw
        current = getattr(type(self)(), key)
        try:
            if key in self._PARSERS:
                return self._PARSERS[key](raw)
            if isinstance(current, bool):
                return raw.strip().lower() in ("1", "true", "yes", "on")
            if isinstance(current, int):
                return int(raw)
            if isinstance(current, float):
                return float(raw)
        except ValueError as exc:
            raise InputDataError(f"invalid value for '{key}': {raw!r}") from exc
        return raw.strip()

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        p = Path(path)
        if not p.exists():
            raise InputDataError("config file not found", path=str(p))
        values: Dict[str, str] = {}
        for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise InputDataError("malformed config line (expected key = value)", path=str(p), row=lineno)
            key, value = stripped.split("=", 1)
            values[key.strip()] = value.strip()
        return cls().update(values)
