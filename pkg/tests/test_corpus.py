from datetime import date

import numpy as np
import pytest

from core.errors import EmptyVocabularyError, InputDataError
from pipeline.corpus import (
    build_corpus,
    load_headlines,
    load_prices,
    load_stop_words,
    stem,
    term_document_matrix,
    tokenize,
)
from schemas.corpus import Document


def _docs(*texts):
    return [Document(id=i, date=date(2020, 1, 1 + i), raw_text=t) for i, t in enumerate(texts)]


def test_load_headlines_reads_rows_in_order(tmp_path):
    p = tmp_path / "h.csv"
    p.write_text("date,headline\n2011-03-29,Oil rises\n2011-03-30,Gold falls\n", encoding="utf-8")
    docs = load_headlines(p)
    assert [d.id for d in docs] == [0, 1]
    assert docs[0].raw_text == "Oil rises"
    assert docs[1].date.isoformat() == "2011-03-30"


def test_load_headlines_header_only_returns_empty(tmp_path):
    p = tmp_path / "h.csv"
    p.write_text("date,headline\n", encoding="utf-8")
    assert load_headlines(p) == []


def test_load_headlines_bad_date_names_row(tmp_path):
    p = tmp_path / "h.csv"
    p.write_text("date,headline\n2011-29-03,Oil rises\n", encoding="utf-8")
    with pytest.raises(InputDataError) as err:
        load_headlines(p)
    assert err.value.row == 1


def test_load_headlines_missing_file_and_column(tmp_path):
    with pytest.raises(InputDataError):
        load_headlines(tmp_path / "nope.csv")
    p = tmp_path / "h.csv"
    p.write_text("day,headline\n2011-03-29,x\n", encoding="utf-8")
    with pytest.raises(InputDataError):
        load_headlines(p)


def test_load_prices_skips_missing_and_sorts(tmp_path):
    p = tmp_path / "p.csv"
    p.write_text("date,price\n2020-01-03,12.5\n2020-01-01,10\n2020-01-02,\n", encoding="utf-8")
    series = load_prices(p)
    assert list(series.index.strftime("%Y-%m-%d")) == ["2020-01-01", "2020-01-03"]
    assert series.iloc[-1] == pytest.approx(12.5)


def test_load_prices_rejects_non_numeric(tmp_path):
    p = tmp_path / "p.csv"
    p.write_text("date,price\n2020-01-01,abc\n", encoding="utf-8")
    with pytest.raises(InputDataError):
        load_prices(p)


def test_tokenize_rules():
    assert tokenize("Gold prices fall, U.S. data ahead", {"a", "the", "u", "s"}) == [
        "gold", "prices", "fall", "data", "ahead"]
    assert tokenize("") == []
    assert tokenize("OIL Oil oil") == ["oil", "oil", "oil"]
    assert tokenize("Brent 2011 x5 up") == ["brent", "up"]


def test_stem_keeps_short_stems():
    assert stem("barrels") == "barrel"
    assert stem("rising") == "ris"
    assert stem("gas") == "gas"


def test_build_corpus_min_df_boundary():
    docs = _docs("oil gas", "oil price", "oil demand")
    corpus = build_corpus(docs, min_df=3)
    assert corpus.vocabulary.terms == ["oil"]
    with pytest.raises(EmptyVocabularyError):
        build_corpus(docs, min_df=4)


def test_build_corpus_toy_encoding_and_empty_docs():
    docs = _docs("oil gas oil", "gas price", "price oil", "the")
    corpus = build_corpus(docs, stop_words={"the"}, min_df=2)
    assert corpus.vocabulary.terms == ["gas", "oil", "price"]
    assert list(corpus.vocabulary.document_frequencies) == [2, 2, 2]
    assert corpus.docs[0].tolist() == [1, 0, 1]
    assert corpus.docs[2].tolist() == [2, 1]
    assert corpus.empty_mask.tolist() == [False, False, False, True]


def test_term_document_matrix_matches_brute_force():
    docs = _docs("oil oil gas", "gas price gas", "", "price oil")
    corpus = build_corpus(docs, min_df=1)
    A = term_document_matrix(corpus).matrix.toarray()
    expected = np.zeros_like(A)
    for j, doc in enumerate(corpus.docs):
        for i in doc:
            expected[i, j] += 1
    np.testing.assert_array_equal(A, expected)
    oil, gas = corpus.vocabulary.id_of("oil"), corpus.vocabulary.id_of("gas")
    assert A[oil, 0] == 2 and A[gas, 0] == 1
    assert A[:, 2].sum() == 0


def test_load_stop_words_ignores_comments(tmp_path):
    p = tmp_path / "stop.txt"
    p.write_text("# comment\nThe\n\nand\n", encoding="utf-8")
    assert load_stop_words(p) == frozenset({"the", "and"})


def _random_texts(n, seed):
    rng = np.random.default_rng(seed)
    alphabet = list("abcdeoilgasXYZéü0129 ,.-'") + ["  "]
    return ["".join(rng.choice(alphabet, size=int(rng.integers(0, 40)))) for _ in range(n)]


def test_tokenize_is_idempotent():
    stops = {"ab", "oil"}
    for text in _random_texts(300, 0):
        tokens = tokenize(text, stops)
        assert tokenize(" ".join(tokens), stops) == tokens
        assert all(len(t) >= 2 and t.isalpha() and t == t.lower() for t in tokens)


def test_min_df_one_keeps_every_token():
    texts = [t for t in _random_texts(200, 1) if tokenize(t)]
    docs = [Document(id=i, date=date(2020, 1, 1), raw_text=t) for i, t in enumerate(texts)]
    corpus = build_corpus(docs, min_df=1)
    terms = corpus.vocabulary.terms
    for text, ids in zip(texts, corpus.docs):
        assert [terms[i] for i in ids] == tokenize(text)
