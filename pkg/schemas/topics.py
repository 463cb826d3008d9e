# schemas/topics.py
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np


@dataclass(frozen=True)
class SeanmfModel:
    W: np.ndarray   # M x K word-topic
    Wc: np.ndarray  # M x K context-topic
    H: np.ndarray   # N x K document-topic
    alpha: float
    seed: int
    objective_trace: List[float] = field(default_factory=list)

    @property
    def n_topics(self) -> int:
        return int(self.W.shape[1])

    @property
    def objective(self) -> float:
        return self.objective_trace[-1] if self.objective_trace else float("nan")

    @property
    def n_iter(self) -> int:
        return max(len(self.objective_trace) - 1, 0)


@dataclass(frozen=True)
class TopicSummary:
    keywords: List[List[Tuple[str, float]]]
    coherence: List[float] = field(default_factory=list)

    @property
    def mean_coherence(self) -> float:
        return float(np.mean(self.coherence)) if self.coherence else float("nan")

    def terms(self, topic: int) -> List[str]:
        return [t for t, _ in self.keywords[topic]]

    def to_rows(self) -> List[Dict[str, object]]:
        rows = []
        for k, words in enumerate(self.keywords):
            for rank, (term, weight) in enumerate(words, start=1):
                rows.append({"topic": k + 1, "rank": rank, "term": term, "weight": float(weight)})
        return rows


@dataclass(frozen=True)
class TopicCountSelection:
    chosen_k: int
    scores: Dict[int, float]
    models: Dict[int, SeanmfModel] = field(default_factory=dict, repr=False)
