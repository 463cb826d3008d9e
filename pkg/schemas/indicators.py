# schemas/indicators.py
"""
Date-indexed indicator series and the regression framing built on top of them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class TopicIntensitySeries:
    """Rows are calendar days with at least one headline; columns topic1..topicK."""
    values: pd.DataFrame
    counts: pd.Series

    @property
    def n_topics(self) -> int:
        return int(self.values.shape[1])


@dataclass(frozen=True)
class SentimentLexicon:
    polarities: Dict[str, float]
    negations: FrozenSet[str] = frozenset()
    intensifiers: Dict[str, float] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.polarities)


@dataclass(frozen=True)
class DailySentiment:
    sv: pd.Series
    counts: pd.Series


@dataclass(frozen=True)
class SentimentIntensitySeries:
    si: pd.Series
    tau: float


@dataclass(frozen=True)
class ColumnScaling:
    minimum: float
    maximum: float

    @property
    def span(self) -> float:
        return self.maximum - self.minimum


@dataclass(frozen=True)
class IndicatorPanel:
    """
    frame holds the target column (price or dprice) first, then topic1..topicK and polarity.
    raw_price is the untransformed price on the same index.
    """
    frame: pd.DataFrame
    raw_price: pd.Series
    price_column: str = "price"
    differenced: bool = False
    scaling: Dict[str, ColumnScaling] = field(default_factory=dict)
    train_end: Optional[pd.Timestamp] = None

    @property
    def index(self) -> pd.DatetimeIndex:
        return self.frame.index  # type: ignore[return-value]

    @property
    def exogenous_columns(self) -> List[str]:
        return [c for c in self.frame.columns if c != self.price_column]

    def inverse_scale(self, column: str, values) -> np.ndarray:
        arr = np.asarray(values, dtype=float)
        sc = self.scaling.get(column)
        if sc is None:
            return arr
        return arr * sc.span + sc.minimum

    def to_frame(self) -> pd.DataFrame:
        out = self.frame.copy()
        out.index.name = "date"
        return out


@dataclass(frozen=True)
class VarFit:
    """y_t = intercept + sum_j coefs[j-1] @ y_{t-j} + u_t, fitted equation by equation."""
    coefs: np.ndarray      # p x K x K
    intercept: np.ndarray  # K
    sigma: np.ndarray      # K x K, residual cross-product / nobs
    nobs: int
    p: int

    @property
    def k(self) -> int:
        return int(self.intercept.shape[0])


@dataclass(frozen=True)
class LagChoice:
    series: str
    lag: int
    sic_table: Dict[int, float]


@dataclass(frozen=True)
class LagSelection:
    choices: Dict[str, LagChoice]

    def lag_of(self, column: str) -> int:
        return self.choices[column].lag

    def restricted(self, columns: List[str]) -> "LagSelection":
        return LagSelection({c: self.choices[c] for c in columns if c in self.choices})

    def to_rows(self) -> List[Dict[str, object]]:
        rows = []
        for name, choice in self.choices.items():
            for p, sic in sorted(choice.sic_table.items()):
                rows.append({"series": name, "p": p, "sic": sic, "chosen": int(p == choice.lag)})
        return rows


@dataclass(frozen=True)
class LagDesign:
    X: np.ndarray
    y: np.ndarray
    columns: List[str]
    dates: pd.DatetimeIndex
    horizon: int
    # (source column, lag j counted from the target date) per feature column
    sources: List[Tuple[str, int]]
    # position of each target row in the panel index
    positions: np.ndarray

    @property
    def n_rows(self) -> int:
        return int(self.X.shape[0])

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.X, columns=self.columns, index=self.dates)
        frame.insert(0, "target", self.y)
        frame.index.name = "date"
        return frame

    def subset(self, columns: List[str]) -> "LagDesign":
        idx = [self.columns.index(c) for c in columns]
        return LagDesign(
            X=self.X[:, idx],
            y=self.y,
            columns=list(columns),
            dates=self.dates,
            horizon=self.horizon,
            sources=[self.sources[i] for i in idx],
            positions=self.positions,
        )
