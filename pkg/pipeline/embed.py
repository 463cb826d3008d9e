# pipeline/embed.py
"""
Word-word co-occurrence counts, the shifted positive PMI word-context matrix S,
and an optional log-bilinear embedding fit used for diagnostics.
"""
from __future__ import annotations

import logging
from typing import Optional

import numpy as np
import scipy.sparse as sp

from configs import settings
from core.errors import ComputationError, DivergenceError, InputDataError
from schemas.corpus import CooccurrenceMatrix, EmbeddingModel, TokenizedCorpus, WordContextMatrix

logger = logging.getLogger(__name__)


def _pair_positions(n: int, window: Optional[int]):
    i, j = np.triu_indices(n, k=1)
    if window is not None:
        keep = (j - i) <= window
        i, j = i[keep], j[keep]
    return i, j


def cooccurrence_counts(
    corpus: TokenizedCorpus,
    window: Optional[int] = None,
    treat_doc_as_window: bool = True,
) -> CooccurrenceMatrix:
    """
    Symmetric unweighted counts. With treat_doc_as_window every pair of positions in a
    headline counts once; otherwise only positions at most `window` apart count.
    """
    if not treat_doc_as_window and (window is None or window < 1):
        raise InputDataError("window must be >= 1 unless each document is treated as one window")
    span = None if treat_doc_as_window else window
    m = len(corpus.vocabulary)
    rows, cols = [], []
    for doc in corpus.docs:
        if doc.size < 2:
            continue
        i, j = _pair_positions(doc.size, span)
        a, b = doc[i], doc[j]
        distinct = a != b
        rows.append(a[distinct])
        cols.append(b[distinct])
    if rows:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
    else:
        r = c = np.zeros(0, dtype=np.int64)
    data = np.ones(2 * r.shape[0], dtype=np.float64)
    matrix = sp.coo_matrix(
        (data, (np.concatenate([r, c]), np.concatenate([c, r]))), shape=(m, m)
    ).tocsr()
    matrix.sum_duplicates()
    logger.info("Co-occurrence matrix %dx%d, %d nonzeros (window=%s).", m, m, matrix.nnz, span or "doc")
    return CooccurrenceMatrix(matrix=matrix, window_size=span)


def sppmi_matrix(X: CooccurrenceMatrix, kappa: int = settings.KAPPA) -> WordContextMatrix:
    if kappa < 1:
        raise InputDataError(f"kappa must be >= 1, got {kappa}")
    counts = X.matrix.tocoo()
    total = float(counts.data.sum())
    if total <= 0:
        raise ComputationError("co-occurrence matrix is all zero; cannot build the word-context matrix")
    row_sums = np.asarray(X.matrix.sum(axis=1)).ravel()
    pmi = np.log(counts.data * total / (row_sums[counts.row] * row_sums[counts.col])) - np.log(kappa)
    shifted = np.maximum(pmi, 0.0)
    S = sp.coo_matrix((shifted, (counts.row, counts.col)), shape=X.matrix.shape).tocsr()
    S.eliminate_zeros()
    logger.info("SPPMI matrix with kappa=%d keeps %d of %d entries.", kappa, S.nnz, counts.nnz)
    return WordContextMatrix(matrix=S, kappa=kappa)


def _weighting(x: np.ndarray, x_max: float, power: float) -> np.ndarray:
    return np.minimum((x / x_max) ** power, 1.0)


def fit_embedding(
    X: CooccurrenceMatrix,
    d: int,
    epochs: int = 50,
    learning_rate: float = 0.05,
    seed: int = settings.DEFAULT_SEED,
    batch_size: Optional[int] = None,
    x_max: float = settings.EMBEDDING_X_MAX,
    power: float = settings.EMBEDDING_POWER,
) -> EmbeddingModel:
    """
    Minimizes sum f(X_ik) (w_i.w~_k + b_i + b~_k - log X_ik)^2 over nonzero X_ik with
    per-coordinate AdaGrad steps. loss_trace[0] is the loss before training; each later
    entry is the mean weighted loss after one epoch.
    """
    if d < 1:
        raise InputDataError(f"embedding dimension must be >= 1, got {d}")
    if learning_rate <= 0:
        raise InputDataError("learning_rate must be positive")
    pairs = X.matrix.tocoo()
    if pairs.nnz == 0:
        raise ComputationError("co-occurrence matrix is all zero; nothing to embed")
    m = X.matrix.shape[0]
    rng = np.random.default_rng(seed)
    W = (rng.random((m, d)) - 0.5) / d
    Wc = (rng.random((m, d)) - 0.5) / d
    b = np.zeros(m)
    bc = np.zeros(m)
    gW, gWc = np.ones_like(W), np.ones_like(Wc)
    gb, gbc = np.ones_like(b), np.ones_like(bc)

    rows, cols = pairs.row, pairs.col
    target = np.log(pairs.data)
    weight = _weighting(pairs.data, x_max, power)
    n_pairs = rows.shape[0]
    step = n_pairs if batch_size is None else max(1, int(batch_size))

    def _loss() -> float:
        diff = np.einsum("ij,ij->i", W[rows], Wc[cols]) + b[rows] + bc[cols] - target
        return float(np.sum(weight * diff ** 2) / n_pairs)

    trace = [_loss()]
    for epoch in range(1, epochs + 1):
        order = rng.permutation(n_pairs)
        for start in range(0, n_pairs, step):
            sel = order[start:start + step]
            i, k = rows[sel], cols[sel]
            diff = np.einsum("ij,ij->i", W[i], Wc[k]) + b[i] + bc[k] - target[sel]
            g = 2.0 * weight[sel] * diff
            grad_W = np.zeros_like(W)
            grad_Wc = np.zeros_like(Wc)
            grad_b = np.zeros_like(b)
            grad_bc = np.zeros_like(bc)
            np.add.at(grad_W, i, g[:, None] * Wc[k])
            np.add.at(grad_Wc, k, g[:, None] * W[i])
            np.add.at(grad_b, i, g)
            np.add.at(grad_bc, k, g)
            gW += grad_W ** 2
            gWc += grad_Wc ** 2
            gb += grad_b ** 2
            gbc += grad_bc ** 2
            W -= learning_rate * grad_W / np.sqrt(gW)
            Wc -= learning_rate * grad_Wc / np.sqrt(gWc)
            b -= learning_rate * grad_b / np.sqrt(gb)
            bc -= learning_rate * grad_bc / np.sqrt(gbc)
        loss = _loss()
        if not np.isfinite(loss):
            raise DivergenceError("embedding loss is not finite", step=epoch)
        trace.append(loss)
        logger.debug("Embedding epoch %d loss %.6g", epoch, loss)
    logger.info("Fitted %d-dim embedding over %d pairs; loss %.4g -> %.4g.", d, n_pairs, trace[0], trace[-1])
    return EmbeddingModel(word_vectors=W, context_vectors=Wc, word_biases=b, context_biases=bc, loss_trace=trace)
