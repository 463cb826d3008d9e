# schemas/forecasting.py
"""
Dataclasses for feature selection, backtest reports and DM tests.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional


@dataclass(frozen=True)
class Metrics:
    rmse: float
    mae: float
    mape: float

    @property
    def mean(self) -> float:
        return (self.rmse + self.mae + self.mape) / 3.0

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class RfeRow:
    p: int
    rmse: float
    mae: float
    mape: float
    mean_score: float
    selected: bool
    eliminations: int


@dataclass(frozen=True)
class RfeResult:
    selected: List[str]
    elimination_order: List[str]
    table: List[RfeRow]
    score_mode: str = "raw"

    @property
    def n_selected(self) -> int:
        return len(self.selected)

    def to_rows(self) -> List[Dict[str, Any]]:
        return [
            {"p": r.p, "rmse": r.rmse, "mae": r.mae, "mape": r.mape,
             "mean_score": r.mean_score, "selected": int(r.selected)}
            for r in self.table
        ]


@dataclass
class ForecastReport:
    model: str
    variant: str
    horizon: int
    dates: List[str]
    y_true: List[float]
    y_pred: List[float]
    y_true_raw: List[float]
    y_pred_raw: List[float]
    metrics: Metrics
    metrics_raw: Metrics
    selected_features: List[str]
    rfe_score_mode: str
    config_fingerprint: str
    params: Dict[str, Any] = field(default_factory=dict)

    @property
    def key(self) -> str:
        return f"{self.model}__{self.variant}__h{self.horizon}"

    @property
    def errors(self) -> List[float]:
        return [p - t for p, t in zip(self.y_pred, self.y_true)]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ForecastReport":
        payload = dict(data)
        payload["metrics"] = Metrics(**payload["metrics"])
        payload["metrics_raw"] = Metrics(**payload["metrics_raw"])
        return cls(**payload)


@dataclass(frozen=True)
class DmResult:
    statistic: float
    two_sided_p: float
    p_better: float
    p_worse: float
    horizon: int
    n: int
    loss: str
    indistinguishable: bool = False
    variance_fallback: bool = False
    note: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
