# pipeline/topics.py
"""
SeaNMF topic model: joint factorization A ~ W H^T, S ~ W Wc^T with a shared word factor W.
Topic count selection by PMI coherence and daily topic intensity (TI) series.
"""
from __future__ import annotations

import logging
from datetime import date
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
import scipy.sparse as sp
from joblib import Parallel, delayed

from configs import settings
from core.errors import ComputationError, DimensionMismatchError, DivergenceError, InputDataError
from schemas.corpus import TermDocMatrix, TokenizedCorpus, Vocabulary, WordContextMatrix
from schemas.indicators import TopicIntensitySeries
from schemas.topics import SeanmfModel, TopicCountSelection, TopicSummary

logger = logging.getLogger(__name__)

# above this many cells the residual norm is expanded instead of densified
_DENSE_LIMIT = 4_000_000


def _sq_residual(X: sp.csr_matrix, X_sq: float, L: np.ndarray, R: np.ndarray) -> float:
    """||X - L R^T||_F^2"""
    if X.shape[0] * X.shape[1] <= _DENSE_LIMIT:
        diff = X.toarray() - L @ R.T
        return float(np.sum(diff * diff))
    cross = float(np.sum(L * (X @ R)))
    gram = float(np.sum((L.T @ L) * (R.T @ R)))
    return max(X_sq - 2.0 * cross + gram, 0.0)


def _objective(A, A_sq, S, S_sq, W, Wc, H, alpha) -> float:
    value = _sq_residual(A, A_sq, W, H)
    if alpha > 0:
        value += alpha * _sq_residual(S, S_sq, W, Wc)
    return value


def derive_seed(seed: int, k: int) -> int:
    return int(np.random.SeedSequence([seed, k]).generate_state(1)[0])


def fit_seanmf(
    A: TermDocMatrix,
    S: WordContextMatrix,
    K: int,
    alpha: float = settings.ALPHA,
    max_iter: int = settings.SEANMF_MAX_ITER,
    tol: float = settings.SEANMF_TOL,
    seed: int = settings.DEFAULT_SEED,
    check_nonnegative: bool = False,
) -> SeanmfModel:
    """
    Alternating multiplicative updates (W, then Wc, then H) with a denominator floor.
    Stops after max_iter iterations or once the relative objective decrease drops below tol.
    """
    Am = sp.csr_matrix(A.matrix, dtype=np.float64)
    Sm = sp.csr_matrix(S.matrix, dtype=np.float64)
    m, n = Am.shape
    if Sm.shape != (m, m):
        raise DimensionMismatchError(f"A has {m} terms but S is {Sm.shape[0]}x{Sm.shape[1]}")
    if K < 2 or K >= min(m, n):
        raise InputDataError(f"K={K} out of range; need 2 <= K < min(M={m}, N={n})")
    if alpha < 0:
        raise InputDataError(f"alpha must be >= 0, got {alpha}")

    rng = np.random.default_rng(seed)
    scale = np.sqrt(Am.sum() / (m * n) / K)
    W = rng.random((m, K)) * scale
    Wc = rng.random((m, K)) * scale
    H = rng.random((n, K)) * scale
    floor = settings.DENOMINATOR_FLOOR
    A_sq = float(Am.multiply(Am).sum())
    S_sq = float(Sm.multiply(Sm).sum())
    AT = Am.T.tocsr()
    ST = Sm.T.tocsr()

    trace = [_objective(Am, A_sq, Sm, S_sq, W, Wc, H, alpha)]
    for it in range(1, max_iter + 1):
        HtH = H.T @ H
        WctWc = Wc.T @ Wc
        W *= (Am @ H + alpha * (Sm @ Wc)) / np.maximum(W @ (HtH + alpha * WctWc), floor)
        WtW = W.T @ W
        Wc *= (ST @ W) / np.maximum(Wc @ WtW, floor)
        H *= (AT @ W) / np.maximum(H @ WtW, floor)
        if check_nonnegative and (W.min() < 0 or Wc.min() < 0 or H.min() < 0):
            raise ComputationError(f"negative factor entry after iteration {it}")
        obj = _objective(Am, A_sq, Sm, S_sq, W, Wc, H, alpha)
        if not np.isfinite(obj):
            raise DivergenceError("SeaNMF objective is not finite", step=it)
        prev = trace[-1]
        trace.append(obj)
        logger.debug("SeaNMF K=%d iteration %d objective %.8g", K, it, obj)
        if prev > 0 and (prev - obj) / prev < tol:
            break
        if prev == 0:
            break
    logger.info("Fitted SeaNMF K=%d alpha=%.3g in %d iterations, objective %.6g.", K, alpha, len(trace) - 1, trace[-1])
    return SeanmfModel(W=W, Wc=Wc, H=H, alpha=alpha, seed=seed, objective_trace=trace)


def topic_keywords(model: SeanmfModel, vocab: Vocabulary, top_n: int = settings.TOP_N_KEYWORDS) -> TopicSummary:
    m = len(vocab)
    if top_n > m or top_n < 1:
        raise InputDataError(f"top_n={top_n} must be within 1..{m}")
    order_ids = np.arange(m)
    keywords = []
    for k in range(model.n_topics):
        col = model.W[:, k]
        ranked = np.lexsort((order_ids, -col))[:top_n]
        keywords.append([(vocab.terms[i], float(col[i])) for i in ranked])
    return TopicSummary(keywords=keywords)


def _presence_matrix(corpus: TokenizedCorpus) -> sp.csc_matrix:
    m, n = len(corpus.vocabulary), corpus.n_docs
    rows = np.repeat(np.arange(n), [len(d) for d in corpus.docs])
    cols = np.concatenate(corpus.docs) if n else np.zeros(0, dtype=np.int64)
    presence = sp.coo_matrix((np.ones(rows.shape[0]), (rows, cols)), shape=(n, m)).tocsc()
    presence.sum_duplicates()
    presence.data = np.minimum(presence.data, 1.0)
    return presence


def topic_coherences(
    summary: TopicSummary,
    corpus: TokenizedCorpus,
    epsilon: float = settings.COHERENCE_EPSILON,
) -> List[float]:
    """Per-topic mean PMI over all unordered keyword pairs, from document co-occurrence."""
    vocab = corpus.vocabulary
    presence = _presence_matrix(corpus)
    n_docs = corpus.n_docs
    scores = []
    for k, words in enumerate(summary.keywords):
        if not words:
            raise InputDataError(f"topic {k + 1} has no keywords")
        ids = []
        for term, _ in words:
            idx = vocab.id_of(term)
            if idx is None:
                raise InputDataError(f"keyword '{term}' is not in the vocabulary")
            ids.append(idx)
        if len(ids) < 2:
            scores.append(0.0)
            continue
        sub = presence[:, ids].toarray()
        joint = sub.T @ sub
        single = np.diag(joint)
        iu, ju = np.triu_indices(len(ids), k=1)
        denom = np.maximum(single[iu] * single[ju], epsilon)
        pmi = np.log((joint[iu, ju] + epsilon) * n_docs / denom)
        scores.append(float(pmi.mean()))
    return scores


def pmi_coherence(
    summary: TopicSummary,
    corpus: TokenizedCorpus,
    epsilon: float = settings.COHERENCE_EPSILON,
) -> float:
    return float(np.mean(topic_coherences(summary, corpus, epsilon)))


def score_summary(summary: TopicSummary, corpus: TokenizedCorpus,
                  epsilon: float = settings.COHERENCE_EPSILON) -> TopicSummary:
    return TopicSummary(keywords=summary.keywords, coherence=topic_coherences(summary, corpus, epsilon))


def select_topic_count(
    A: TermDocMatrix,
    S: WordContextMatrix,
    k_range: Sequence[int],
    corpus: TokenizedCorpus,
    alpha: float = settings.ALPHA,
    max_iter: int = settings.SEANMF_MAX_ITER,
    tol: float = settings.SEANMF_TOL,
    seed: int = settings.DEFAULT_SEED,
    top_n: int = settings.TOP_N_KEYWORDS,
    epsilon: float = settings.COHERENCE_EPSILON,
    n_jobs: Optional[int] = None,
) -> TopicCountSelection:
    """Fits one model per K (seed derived from the base seed and K); argmax mean coherence, ties to smaller K."""
    ks = sorted(set(int(k) for k in k_range))
    if not ks:
        raise InputDataError("k_range is empty")
    n_top = min(top_n, len(corpus.vocabulary))

    def _fit_and_score(k: int):
        model = fit_seanmf(A, S, k, alpha=alpha, max_iter=max_iter, tol=tol, seed=derive_seed(seed, k))
        summary = topic_keywords(model, corpus.vocabulary, n_top)
        return k, model, pmi_coherence(summary, corpus, epsilon)

    results = Parallel(n_jobs=n_jobs, prefer="threads")(delayed(_fit_and_score)(k) for k in ks)
    scores: Dict[int, float] = {}
    models: Dict[int, SeanmfModel] = {}
    for k, model, score in results:
        scores[k] = score
        models[k] = model
        logger.info("Topic count K=%d mean PMI coherence %.4f", k, score)
    chosen = ks[0]
    for k in ks[1:]:
        if scores[k] > scores[chosen]:
            chosen = k
    logger.info("Selected K=%d from %s.", chosen, ks)
    return TopicCountSelection(chosen_k=chosen, scores=scores, models=models)


def normalized_document_topics(model: SeanmfModel) -> np.ndarray:
    H = model.H
    k = H.shape[1]
    sums = H.sum(axis=1, keepdims=True)
    out = np.full_like(H, 1.0 / k)
    nz = sums[:, 0] > 0
    out[nz] = H[nz] / sums[nz]
    return out


def topic_intensity_series(model: SeanmfModel, dates: Sequence[date], K: Optional[int] = None) -> TopicIntensitySeries:
    """TI_it: mean of the L1-normalized topic weights of the headlines dated t."""
    if model.H.shape[0] != len(dates):
        raise DimensionMismatchError(f"H has {model.H.shape[0]} rows but {len(dates)} dates were given")
    k = K or model.n_topics
    if k != model.n_topics:
        raise DimensionMismatchError(f"K={k} does not match the model's {model.n_topics} topics")
    weights = normalized_document_topics(model)
    frame = pd.DataFrame(weights, columns=[f"topic{i + 1}" for i in range(k)])
    frame["date"] = pd.to_datetime(list(dates))
    grouped = frame.groupby("date", sort=True)
    values = grouped.mean()
    counts = grouped.size().rename("n_docs")
    values.index = pd.DatetimeIndex(values.index, name="date")
    counts.index = values.index
    logger.info("Topic intensity series over %d days (K=%d).", len(values), k)
    return TopicIntensitySeries(values=values, counts=counts)
