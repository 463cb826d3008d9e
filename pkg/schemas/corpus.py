# schemas/corpus.py
"""
Dataclasses for headline corpora and the sparse text matrices built from them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from typing import Dict, List, Optional

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True)
class Document:
    id: int
    date: date
    raw_text: str


@dataclass(frozen=True)
class Vocabulary:
    terms: List[str]
    document_frequencies: np.ndarray
    index: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            object.__setattr__(self, "index", {t: i for i, t in enumerate(self.terms)})

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index

    def id_of(self, term: str) -> Optional[int]:
        return self.index.get(term)


@dataclass(frozen=True)
class TokenizedCorpus:
    vocabulary: Vocabulary
    docs: List[np.ndarray]
    dates: List[date]

    @property
    def n_docs(self) -> int:
        return len(self.docs)

    @property
    def empty_mask(self) -> np.ndarray:
        return np.array([len(d) == 0 for d in self.docs], dtype=bool)

    @property
    def n_tokens(self) -> int:
        return int(sum(len(d) for d in self.docs))


@dataclass(frozen=True)
class TermDocMatrix:
    """M x N term-frequency counts; rows are terms, columns documents."""
    matrix: sp.csr_matrix

    @property
    def shape(self):
        return self.matrix.shape


@dataclass(frozen=True)
class CooccurrenceMatrix:
    """Symmetric M x M co-occurrence counts with a zero diagonal."""
    matrix: sp.csr_matrix
    window_size: Optional[int]


@dataclass(frozen=True)
class WordContextMatrix:
    """Shifted positive PMI matrix consumed by SeaNMF."""
    matrix: sp.csr_matrix
    kappa: int


@dataclass(frozen=True)
class EmbeddingModel:
    word_vectors: np.ndarray
    context_vectors: np.ndarray
    word_biases: np.ndarray
    context_biases: np.ndarray
    loss_trace: List[float] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return int(self.word_vectors.shape[1])

    @property
    def final_loss(self) -> float:
        return self.loss_trace[-1] if self.loss_trace else float("nan")
