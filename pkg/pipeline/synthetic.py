# pipeline/synthetic.py
"""
Synthetic headline/price bundle with planted structure: four topics with disjoint
vocabularies whose daily shares drift, a mood process that picks positive or negative
lexicon words, and a price whose daily change is driven by the previous trading day's
headline mix: topic fractions and mean lexicon polarity, with weekend news folded
into the next trading day the way the aligned panel sees it.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List

import numpy as np
import pandas as pd

from configs import settings
from pipeline.corpus import tokenize
from pipeline.sentiment import headline_polarity, load_lexicon

logger = logging.getLogger(__name__)

PLANTED_TOPICS: Dict[str, List[str]] = {
    "supply": ["opec", "output", "production", "quota", "barrels", "supply", "pipeline", "inventories", "rigs", "shale"],
    "demand": ["china", "demand", "imports", "economy", "factory", "consumption", "refinery", "gasoline", "travel", "shipping"],
    "geopolitics": ["iran", "sanctions", "conflict", "tensions", "embargo", "military", "talks", "libya", "strait", "militants"],
    "finance": ["dollar", "fed", "rates", "inflation", "hedge", "funds", "futures", "speculators", "yields", "currency"],
}
POSITIVE_WORDS = ["gains", "surge", "rally", "rises", "strong", "boost", "climbs", "rebound"]
NEGATIVE_WORDS = ["falls", "slump", "drop", "weak", "losses", "plunge", "slides", "tumbles"]
FILLER_WORDS = ["market", "traders", "report", "week", "analysts", "session"]


@dataclass(frozen=True)
class SyntheticBundle:
    headlines: pd.DataFrame  # date, headline
    prices: pd.DataFrame     # date, price
    train_end: str
    topic_shares: pd.DataFrame
    mood: pd.Series
    drivers: pd.DataFrame  # folded headline indicators per trading day


def _softmax(z: np.ndarray) -> np.ndarray:
    e = np.exp(z - z.max(axis=1, keepdims=True))
    return e / e.sum(axis=1, keepdims=True)


def generate_bundle(
    n_days: int = 420,
    headlines_per_day: float = 6.0,
    seed: int = settings.DEFAULT_SEED,
    start: str = "2015-01-05",
    noise: float = 0.15,
    topic_effect: float = 2.5,
    sentiment_effect: float = 1.0,
    train_fraction: float = 0.75,
) -> SyntheticBundle:
    rng = np.random.default_rng(seed)
    lexicon = load_lexicon(settings.LEXICON_PATH)
    calendar = pd.date_range(start, periods=n_days, freq="D", name="date")
    names = list(PLANTED_TOPICS)
    k = len(names)

    z = np.zeros((n_days, k))
    mood = np.zeros(n_days)
    for t in range(1, n_days):
        z[t] = 0.9 * z[t - 1] + rng.normal(0.0, 0.45, k)
        mood[t] = 0.85 * mood[t - 1] + rng.normal(0.0, 0.35)
    shares = _softmax(z)
    mood = np.tanh(mood)

    rows: List[Dict[str, str]] = []
    planted: List[tuple] = []
    for t, day in enumerate(calendar):
        rate = headlines_per_day * (0.4 if day.dayofweek >= 5 else 1.0)
        for _ in range(rng.poisson(rate)):
            topic = rng.choice(k, p=shares[t])
            words = list(rng.choice(PLANTED_TOPICS[names[topic]], size=3, replace=False))
            if rng.random() < 0.8:
                pool = POSITIVE_WORDS if rng.random() < (1.0 + mood[t]) / 2.0 else NEGATIVE_WORDS
                words.append(str(rng.choice(pool)))
            words.append(str(rng.choice(FILLER_WORDS)))
            rng.shuffle(words)
            text = " ".join(str(w) for w in words)
            rows.append({"date": day.strftime("%Y-%m-%d"), "headline": text[:1].upper() + text[1:]})
            planted.append((day, int(topic), headline_polarity(tokenize(text), lexicon)))

    trading = calendar[calendar.dayofweek < 5]
    drivers = _folded_indicators(planted, names, trading)
    # trading day t moves with the indicators of trading day t-1
    observed = drivers.shift(1).fillna({**{n: 1.0 / k for n in names}, "sv": 0.0})
    driver = (topic_effect * (observed[names[0]] - observed[names[2]])
              + sentiment_effect * observed["sv"]).to_numpy()
    changes = driver + rng.normal(0.0, noise, len(trading))
    price = 60.0 + np.cumsum(changes)
    prices = pd.DataFrame({"date": trading.strftime("%Y-%m-%d"), "price": np.round(price, 4)})
    train_end = trading[int(len(trading) * train_fraction)].strftime("%Y-%m-%d")
    logger.info("Synthetic bundle: %d headlines over %d days, %d trading days, train_end=%s.",
                len(rows), n_days, len(trading), train_end)
    return SyntheticBundle(
        headlines=pd.DataFrame(rows, columns=["date", "headline"]),
        prices=prices,
        train_end=train_end,
        topic_shares=pd.DataFrame(shares, index=calendar, columns=names),
        mood=pd.Series(mood, index=calendar, name="mood"),
        drivers=drivers,
    )


def _folded_indicators(planted, names: List[str], trading: pd.DatetimeIndex) -> pd.DataFrame:
    """
    Per calendar day: fraction of headlines per planted topic and mean polarity. Days
    after the previous trading day are averaged into the next one, gaps forward-filled.
    """
    frame = pd.DataFrame(planted, columns=["date", "topic", "pv"])
    shares = pd.crosstab(frame["date"], frame["topic"], normalize="index")
    shares = shares.reindex(columns=range(len(names)), fill_value=0.0)
    shares.columns = names
    daily = shares.join(frame.groupby("date")["pv"].mean().rename("sv"))
    pos = trading.searchsorted(daily.index, side="left")
    inside = pos < len(trading)
    daily = daily[inside]
    daily.index = trading[pos[inside]]
    folded = daily.groupby(level=0, sort=True).mean().reindex(trading).ffill()
    folded.index.name = "date"
    return folded


def bundle_config(bundle: SyntheticBundle, directory: Path) -> Dict[str, str]:
    """Run settings sized for a quick end-to-end pass over the bundle."""
    d = Path(directory).resolve()
    return {
        "headlines_path": str(d / "headlines.csv"),
        "prices_path": str(d / "prices.csv"),
        "output_dir": str(d / "output"),
        "train_end": bundle.train_end,
        "k_range": "3..5",
        "min_df": "2",
        "max_iter": "150",
        "p_max": "3",
        "horizons": "1,2,3",
        "rf_trees": "25",
        "seed": str(settings.DEFAULT_SEED),
    }
