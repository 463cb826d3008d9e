# pipeline/corpus.py
"""
Headline and price ingestion, tokenization, vocabulary and the word-document matrix A.
"""
from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import FrozenSet, Iterable, List, Sequence

import numpy as np
import pandas as pd
import scipy.sparse as sp
from sklearn.feature_extraction.text import CountVectorizer

from core.errors import EmptyVocabularyError, InputDataError
from schemas.corpus import Document, TermDocMatrix, TokenizedCorpus, Vocabulary

logger = logging.getLogger(__name__)

# runs of Unicode letters; digits, underscores, periods and punctuation all split tokens
TOKEN_PATTERN = re.compile(r"[^\W\d_]+")
MIN_TOKEN_LENGTH = 2
_SUFFIXES = ("ing", "ed", "es", "s")


def _read_csv(path: str | Path, required: Sequence[str]) -> pd.DataFrame:
    p = Path(path)
    if not p.exists():
        raise InputDataError("file not found", path=str(p))
    frame = pd.read_csv(p, dtype=str, keep_default_na=False, encoding="utf-8")
    frame.columns = [c.strip() for c in frame.columns]
    for col in required:
        if col not in frame.columns:
            raise InputDataError(f"missing column '{col}'", path=str(p))
    return frame


def _parse_dates(values: pd.Series, path: str | Path) -> pd.Series:
    cleaned = values.astype(str).str.strip()
    parsed = pd.to_datetime(cleaned, format="%Y-%m-%d", errors="coerce")
    bad = np.flatnonzero(parsed.isna().to_numpy())
    if bad.size:
        pos = int(bad[0])
        row = int(values.index[pos]) + 1
        raise InputDataError(f"unparseable date '{cleaned.iloc[pos]}'", path=str(path), row=row)
    return parsed


def load_headlines(path: str | Path, date_column: str = "date", text_column: str = "headline") -> List[Document]:
    frame = _read_csv(path, [date_column, text_column])
    if frame.empty:
        logger.info("Headline file %s has no data rows.", path)
        return []
    dates = _parse_dates(frame[date_column], path)
    docs = [
        Document(id=i, date=d.date(), raw_text=str(text))
        for i, (d, text) in enumerate(zip(dates, frame[text_column]))
    ]
    logger.info("Loaded %d headlines from %s.", len(docs), path)
    return docs


def load_prices(path: str | Path, date_column: str = "date", price_column: str = "price") -> pd.Series:
    """Date-indexed prices sorted ascending; rows with a missing price are skipped."""
    frame = _read_csv(path, [date_column, price_column])
    raw = frame[price_column].astype(str).str.strip()
    missing = raw.eq("") | raw.str.lower().isin(["nan", "na", "null", "."])
    if missing.any():
        logger.warning("Skipped %d price rows with a missing price in %s.", int(missing.sum()), path)
    kept = frame.loc[~missing]
    dates = _parse_dates(kept[date_column], path)
    values = pd.to_numeric(raw[~missing], errors="coerce")
    bad = np.flatnonzero(values.isna().to_numpy())
    if bad.size:
        row = int(kept.index[bad[0]]) + 1
        raise InputDataError(f"unparseable price '{raw[~missing].iloc[bad[0]]}'", path=str(path), row=row)
    series = pd.Series(values.to_numpy(dtype=float), index=pd.DatetimeIndex(dates.to_numpy()), name=price_column)
    if series.index.has_duplicates:
        logger.warning("Duplicate price dates in %s; keeping the last value per date.", path)
        series = series[~series.index.duplicated(keep="last")]
    series = series.sort_index()
    series.index.name = "date"
    logger.info("Loaded %d prices from %s.", len(series), path)
    return series


def load_stop_words(path: str | Path) -> FrozenSet[str]:
    p = Path(path)
    if not p.exists():
        raise InputDataError("stop-word file not found", path=str(p))
    words = set()
    for line in p.read_text(encoding="utf-8").splitlines():
        w = line.strip().lower()
        if w and not w.startswith("#"):
            words.add(w)
    logger.info("Loaded %d stop words from %s.", len(words), p)
    return frozenset(words)


def stem(token: str) -> str:
    """Naive suffix stripping; keeps at least three characters of stem."""
    for suffix in _SUFFIXES:
        if token.endswith(suffix) and len(token) - len(suffix) >= 3:
            return token[: -len(suffix)]
    return token


def tokenize(raw_text: str, stop_words: Iterable[str] = frozenset(), use_stemmer: bool = False) -> List[str]:
    stops = stop_words if isinstance(stop_words, (set, frozenset)) else set(stop_words)
    tokens = []
    for tok in TOKEN_PATTERN.findall((raw_text or "").lower()):
        if len(tok) < MIN_TOKEN_LENGTH or tok in stops:
            continue
        if use_stemmer:
            tok = stem(tok)
        tokens.append(tok)
    return tokens


def build_corpus(
    docs: Sequence[Document],
    stop_words: Iterable[str] = frozenset(),
    min_df: int = 1,
    use_stemmer: bool = False,
) -> TokenizedCorpus:
    if not docs:
        raise EmptyVocabularyError("no documents to build a vocabulary from")
    if min_df < 1:
        raise InputDataError(f"min_df must be >= 1, got {min_df}")
    stops = frozenset(stop_words)
    tokenized = [tokenize(d.raw_text, stops, use_stemmer) for d in docs]
    vectorizer = CountVectorizer(analyzer=lambda toks: toks, min_df=min_df)
    try:
        doc_term = vectorizer.fit_transform(tokenized)
    except ValueError as exc:
        raise EmptyVocabularyError(f"vocabulary empty after filtering (min_df={min_df}): {exc}") from exc
    terms = [str(t) for t in vectorizer.get_feature_names_out()]
    dfs = np.asarray((doc_term > 0).sum(axis=0)).ravel().astype(np.int64)
    vocab = Vocabulary(terms=terms, document_frequencies=dfs)
    encoded = [
        np.array([vocab.index[t] for t in toks if t in vocab.index], dtype=np.int64)
        for toks in tokenized
    ]
    n_empty = sum(1 for e in encoded if e.size == 0)
    if n_empty:
        logger.warning("%d of %d headlines have no tokens left after filtering.", n_empty, len(docs))
    logger.info("Built corpus: %d docs, vocabulary %d terms (min_df=%d).", len(docs), len(terms), min_df)
    return TokenizedCorpus(vocabulary=vocab, docs=encoded, dates=[d.date for d in docs])


def term_document_matrix(corpus: TokenizedCorpus) -> TermDocMatrix:
    m, n = len(corpus.vocabulary), corpus.n_docs
    if m == 0:
        raise EmptyVocabularyError("term-document matrix needs a nonempty vocabulary")
    rows = np.concatenate(corpus.docs) if n else np.zeros(0, dtype=np.int64)
    cols = np.repeat(np.arange(n), [len(d) for d in corpus.docs])
    data = np.ones(rows.shape[0], dtype=np.int64)
    matrix = sp.coo_matrix((data, (rows, cols)), shape=(m, n)).tocsr()
    matrix.sum_duplicates()
    logger.info("Term-document matrix %dx%d with %d nonzeros.", m, n, matrix.nnz)
    return TermDocMatrix(matrix=matrix)
