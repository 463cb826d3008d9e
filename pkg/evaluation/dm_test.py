# evaluation/dm_test.py
"""
Diebold-Mariano test with the small-sample adjustment, and the better/worse
p-value grid across models.
"""
from __future__ import annotations

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from configs import settings
from core.errors import DateAlignmentError, InputDataError
from schemas.forecasting import DmResult, ForecastReport

logger = logging.getLogger(__name__)

LOSSES = {
    "squared": np.square,
    "absolute": np.abs,
}


def _autocovariance(d: np.ndarray, lag: int) -> float:
    n = d.shape[0]
    centered = d - d.mean()
    return float(np.sum(centered[lag:] * centered[:n - lag]) / n)


def dm_test(e_a, e_b, h: int = 1, loss: str = settings.DM_LOSS) -> DmResult:
    """Negative statistic means series A has the smaller loss; p_better = P(T <= DM*)."""
    a = np.asarray(e_a, dtype=float).ravel()
    b = np.asarray(e_b, dtype=float).ravel()
    if loss not in LOSSES:
        raise InputDataError(f"unknown DM loss '{loss}' (expected squared or absolute)")
    if h < 1:
        raise InputDataError(f"horizon must be >= 1, got {h}")
    if a.shape != b.shape:
        raise InputDataError(f"error series lengths differ: {a.size} vs {b.size}")
    n = a.size
    if n <= h:
        raise InputDataError(f"DM test needs more than h={h} observations, got {n}")

    d = LOSSES[loss](a) - LOSSES[loss](b)
    d_bar = float(d.mean())
    gamma0 = _autocovariance(d, 0)
    if gamma0 <= 0.0:
        if np.all(d == 0):
            return DmResult(statistic=0.0, two_sided_p=1.0, p_better=0.5, p_worse=0.5, horizon=h, n=n,
                            loss=loss, indistinguishable=True, note="identical losses")
        # constant nonzero loss differential: one series is uniformly better
        statistic = float(np.copysign(np.inf, d_bar))
        p_better = 0.0 if d_bar < 0 else 1.0
        return DmResult(statistic=statistic, two_sided_p=0.0, p_better=p_better, p_worse=1.0 - p_better,
                        horizon=h, n=n, loss=loss, note="constant loss differential")

    variance = gamma0 + 2.0 * sum(_autocovariance(d, k) for k in range(1, h))
    fallback = False
    if variance <= 0.0:
        logger.warning("Negative long-run variance at h=%d; using the lag-0 autocovariance.", h)
        variance = gamma0
        fallback = True
    dm = d_bar / np.sqrt(variance / n)
    adjusted = float(dm * np.sqrt((n + 1 - 2 * h + h * (h - 1) / n) / n))
    p_better = float(stats.t.cdf(adjusted, df=n - 1))
    p_worse = float(stats.t.sf(adjusted, df=n - 1))
    return DmResult(
        statistic=adjusted,
        two_sided_p=min(1.0, 2.0 * min(p_better, p_worse)),
        p_better=p_better,
        p_worse=p_worse,
        horizon=h,
        n=n,
        loss=loss,
        variance_fallback=fallback,
    )


def report_label(report: ForecastReport) -> str:
    return f"{report.model}__{report.variant}"


def compare_models(
    reports: Sequence[ForecastReport],
    baseline: str,
    horizons: Optional[Sequence[int]] = None,
    loss: str = settings.DM_LOSS,
) -> pd.DataFrame:
    """
    Long-format grid `baseline,challenger,h,direction,p`. `better` is the p-value for
    the baseline having the smaller loss than the challenger.
    """
    by_key: Dict[Tuple[str, int], ForecastReport] = {(report_label(r), r.horizon): r for r in reports}
    labels = sorted({label for label, _ in by_key})
    if baseline not in labels:
        raise InputDataError(f"baseline '{baseline}' not among reports ({', '.join(labels)})")
    hs = sorted({h for _, h in by_key}) if horizons is None else list(horizons)
    rows: List[Dict[str, object]] = []
    for challenger in labels:
        if challenger == baseline:
            continue
        for h in hs:
            base = by_key.get((baseline, h))
            other = by_key.get((challenger, h))
            if base is None or other is None:
                raise InputDataError(f"missing report for h={h} ({baseline} vs {challenger})")
            if list(base.dates) != list(other.dates):
                raise DateAlignmentError(f"test dates differ between {baseline} and {challenger} at h={h}")
            result = dm_test(base.errors, other.errors, h=h, loss=loss)
            rows.append({"baseline": baseline, "challenger": challenger, "h": h,
                         "direction": "better", "p": result.p_better})
            rows.append({"baseline": baseline, "challenger": challenger, "h": h,
                         "direction": "worse", "p": result.p_worse})
    logger.info("DM grid for baseline %s: %d comparisons.", baseline, len(rows) // 2)
    return pd.DataFrame(rows, columns=["baseline", "challenger", "h", "direction", "p"])


def pivot_dm_grid(grid: pd.DataFrame, direction: str = "better") -> pd.DataFrame:
    """One row per challenger, one column per horizon."""
    subset = grid[grid["direction"] == direction]
    return subset.pivot(index="challenger", columns="h", values="p")
