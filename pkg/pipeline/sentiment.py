# pipeline/sentiment.py
"""
Lexicon polarity per headline (PV), daily sentiment value SV_t and the
exponentially decayed sentiment intensity SI_t.
"""
from __future__ import annotations

import logging
from datetime import date
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.signal import lfilter

from configs import settings
from core.errors import InputDataError
from schemas.indicators import DailySentiment, SentimentIntensitySeries, SentimentLexicon

logger = logging.getLogger(__name__)

NEGATION_WINDOW = 2
_SECTIONS = ("polarities", "negations", "intensifiers")


def load_lexicon(path: str | Path) -> SentimentLexicon:
    """
    Tab-separated `term<TAB>polarity` lines, optional [negations] (one term per line)
    and [intensifiers] (`term<TAB>multiplier`) sections, `#` comments.
    """
    p = Path(path)
    if not p.exists():
        raise InputDataError("lexicon file not found", path=str(p))
    polarities: Dict[str, float] = {}
    negations = set()
    intensifiers: Dict[str, float] = {}
    section = "polarities"
    for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            section = stripped[1:-1].strip().lower()
            if section not in _SECTIONS:
                raise InputDataError(f"unknown lexicon section '{section}'", path=str(p), row=lineno)
            continue
        parts = stripped.split("\t")
        if section == "negations":
            if len(parts) != 1:
                raise InputDataError("malformed negation line", path=str(p), row=lineno)
            negations.add(parts[0].strip().lower())
            continue
        if len(parts) != 2 or not parts[0].strip():
            raise InputDataError("malformed lexicon line (expected term<TAB>value)", path=str(p), row=lineno)
        term = parts[0].strip().lower()
        try:
            value = float(parts[1])
        except ValueError as exc:
            raise InputDataError(f"non-numeric value '{parts[1]}'", path=str(p), row=lineno) from exc
        if section == "intensifiers":
            if not value > 0:
                raise InputDataError(f"intensifier multiplier must be > 0, got {value}", path=str(p), row=lineno)
            intensifiers[term] = value
        else:
            if not -1.0 <= value <= 1.0:
                raise InputDataError(f"polarity {value} outside [-1, 1]", path=str(p), row=lineno)
            polarities[term] = value
    logger.info("Loaded lexicon %s: %d polarities, %d negations, %d intensifiers.",
                p, len(polarities), len(negations), len(intensifiers))
    return SentimentLexicon(polarities=polarities, negations=frozenset(negations), intensifiers=intensifiers)


def headline_polarity(tokens: Sequence[str], lexicon: SentimentLexicon) -> float:
    scores = []
    for i, tok in enumerate(tokens):
        polarity = lexicon.polarities.get(tok)
        if polarity is None:
            continue
        if i > 0:
            polarity *= lexicon.intensifiers.get(tokens[i - 1], 1.0)
        if any(t in lexicon.negations for t in tokens[max(0, i - NEGATION_WINDOW):i]):
            polarity = -polarity
        scores.append(polarity)
    if not scores:
        return 0.0
    return float(np.clip(np.mean(scores), -1.0, 1.0))


def daily_sentiment(docs: Iterable[Tuple[date, float]]) -> DailySentiment:
    rows: List[Tuple[date, float]] = list(docs)
    if not rows:
        empty = pd.Series(dtype=float, index=pd.DatetimeIndex([], name="date"))
        return DailySentiment(sv=empty.rename("sv"), counts=empty.astype(int).rename("n_docs"))
    frame = pd.DataFrame(rows, columns=["date", "pv"])
    frame["date"] = pd.to_datetime(frame["date"])
    grouped = frame.groupby("date", sort=True)["pv"]
    sv = grouped.mean().rename("sv")
    counts = grouped.size().rename("n_docs")
    sv.index = pd.DatetimeIndex(sv.index, name="date")
    counts.index = sv.index
    return DailySentiment(sv=sv, counts=counts)


def decay_weights(tau: float = settings.TAU, m_max: int = 7) -> np.ndarray:
    """e^{-m/tau} for m = 0..m_max."""
    return np.exp(-np.arange(m_max + 1) / tau)


def decayed_sentiment_intensity(sv: DailySentiment, tau: float = settings.TAU) -> SentimentIntensitySeries:
    """
    SI_t = SV_t + e^{-1/tau} SI_{t-1} over consecutive calendar days, SV = 0 on days
    without headlines; reported on the dates present in sv.
    """
    if tau <= 0:
        raise InputDataError(f"tau must be > 0, got {tau}")
    series = sv.sv
    if not series.index.is_monotonic_increasing or series.index.has_duplicates:
        raise InputDataError("sentiment dates must be sorted ascending and unique")
    if series.empty:
        return SentimentIntensitySeries(si=series.rename("si"), tau=tau)
    calendar = pd.date_range(series.index[0], series.index[-1], freq="D", name="date")
    filled = series.reindex(calendar, fill_value=0.0).to_numpy(dtype=float)
    decay = np.exp(-1.0 / tau)
    si_full = lfilter([1.0], [1.0, -decay], filled)
    si = pd.Series(si_full, index=calendar, name="si").reindex(series.index)
    logger.info("Sentiment intensity over %d news days (%d calendar days), tau=%.3g.",
                len(series), len(calendar), tau)
    return SentimentIntensitySeries(si=si, tau=tau)
