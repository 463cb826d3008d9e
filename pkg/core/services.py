import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

from adapters.lexicon_scorer import LexiconScorer
from adapters.seanmf_store import save_seanmf
from core.errors import InputDataError
from core.ports import OutputSink, PolarityScorer
from evaluation.backtest import HorizonOutcome, aggregate_rows, backtest_horizon, feature_selection_matrix
from evaluation.dm_test import compare_models, report_label
from learn.model_io import model_to_dict
from pipeline.corpus import build_corpus, load_headlines, load_prices, load_stop_words, term_document_matrix, tokenize
from pipeline.embed import cooccurrence_counts, fit_embedding, sppmi_matrix
from pipeline.sentiment import daily_sentiment, decayed_sentiment_intensity
from pipeline.topics import fit_seanmf, score_summary, select_topic_count, topic_intensity_series, topic_keywords
from pipeline.tsfeat import align_panel, select_lags, transform_series
from pipeline.validators import validate_report_schema
from schemas.corpus import TokenizedCorpus
from schemas.forecasting import ForecastReport
from schemas.indicators import DailySentiment, IndicatorPanel, LagSelection, SentimentIntensitySeries, TopicIntensitySeries
from schemas.run_config import RunConfig
from schemas.topics import SeanmfModel, TopicSummary
from services.storage_service import OutputWriter, read_csv

logger = logging.getLogger(__name__)

TOPICS_CSV = "topics.csv"
COHERENCE_CSV = "coherence.csv"
INTENSITY_CSV = "topic_intensity.csv"
SENTIMENT_CSV = "sentiment.csv"
RESULTS_CSV = "results.csv"
DM_GRID_CSV = "dm_grid.csv"


@dataclass
class TopicStage:
    corpus: TokenizedCorpus
    model: SeanmfModel
    summary: TopicSummary
    intensity: TopicIntensitySeries
    scores: Dict[int, float] = field(default_factory=dict)


@dataclass
class SentimentStage:
    daily: DailySentiment
    intensity: SentimentIntensitySeries


@dataclass
class FeatureStage:
    panels: Dict[str, IndicatorPanel]
    lags: Dict[str, LagSelection]


class ForecastingPipelineService:
    """
    Orchestrates corpus -> topics/sentiment -> panel -> backtests -> DM grid.
    The polarity scorer and the output sink are injectable; defaults are the bundled
    lexicon and a fingerprinting writer under config.output_dir.
    """

    def __init__(self, config: RunConfig, writer: Optional[OutputSink] = None,
                 scorer: Optional[PolarityScorer] = None):
        self.config = config
        self.writer = writer or OutputWriter(config.output_dir, config.fingerprint())
        self._scorer = scorer

    @property
    def scorer(self) -> PolarityScorer:
        if self._scorer is None:
            self._scorer = LexiconScorer(path=self.config.lexicon_path)
        return self._scorer

    # inputs

    def _headlines(self):
        if not self.config.headlines_path:
            raise InputDataError("no headlines file configured (--headlines)")
        return load_headlines(self.config.headlines_path, self.config.date_column, self.config.text_column)

    def _prices(self) -> pd.Series:
        if not self.config.prices_path:
            raise InputDataError("no price file configured (--prices)")
        return load_prices(self.config.prices_path, self.config.date_column, self.config.price_name)

    # stages

    def run_topics(self) -> TopicStage:
        cfg = self.config
        docs = self._headlines()
        corpus = build_corpus(docs, load_stop_words(cfg.stop_words_path), cfg.min_df, cfg.stem)
        A = term_document_matrix(corpus)
        X = cooccurrence_counts(corpus)
        S = sppmi_matrix(X, cfg.kappa)
        if cfg.fit_embedding:
            emb = fit_embedding(X, d=min(50, max(2, len(corpus.vocabulary) // 2)), seed=cfg.seed)
            self.writer.save_csv([{"epoch": i, "loss": v} for i, v in enumerate(emb.loss_trace)],
                                 "embedding_loss.csv", columns=["epoch", "loss"])

        ks = sorted(set(cfg.k_range))
        if len(ks) == 1:
            model = fit_seanmf(A, S, ks[0], cfg.alpha, cfg.max_iter, cfg.tol, cfg.seed)
            scores: Dict[int, float] = {}
        else:
            selection = select_topic_count(A, S, ks, corpus, cfg.alpha, cfg.max_iter, cfg.tol, cfg.seed,
                                           top_n=cfg.top_n)
            model = selection.models[selection.chosen_k]
            scores = selection.scores
        top_n = min(cfg.top_n, len(corpus.vocabulary))
        summary = score_summary(topic_keywords(model, corpus.vocabulary, top_n), corpus)
        if not scores:
            scores = {model.n_topics: summary.mean_coherence}
        intensity = topic_intensity_series(model, corpus.dates)

        self.writer.save_csv(summary.to_rows(), TOPICS_CSV, columns=["topic", "rank", "term", "weight"])
        self.writer.save_csv(
            [{"k": k, "mean_coherence": s, "chosen": int(k == model.n_topics)} for k, s in sorted(scores.items())],
            COHERENCE_CSV, columns=["k", "mean_coherence", "chosen"])
        self.writer.save_csv([{"topic": i + 1, "coherence": c} for i, c in enumerate(summary.coherence)],
                             "topic_coherence.csv", columns=["topic", "coherence"])
        frame = intensity.values.copy()
        frame["n_docs"] = intensity.counts
        self.writer.save_csv(frame, INTENSITY_CSV, index=True)
        model_dir = self.writer.path("seanmf")
        save_seanmf(model, model_dir, self.writer.fingerprint)
        for name in ("W.txt", "Wc.txt", "H.txt", "meta.txt"):
            self.writer.track(model_dir / name)
        return TopicStage(corpus=corpus, model=model, summary=summary, intensity=intensity, scores=scores)

    def run_sentiment(self) -> SentimentStage:
        # stop words are kept: negations and intensifiers live in the stop list
        docs = self._headlines()
        pairs = [(d.date, self.scorer.score(tokenize(d.raw_text))) for d in docs]
        daily = daily_sentiment(pairs)
        si = decayed_sentiment_intensity(daily, self.config.tau)
        frame = pd.DataFrame({"sv": daily.sv, "si": si.si, "n_docs": daily.counts})
        frame.index.name = "date"
        self.writer.save_csv(frame, SENTIMENT_CSV, index=True)
        return SentimentStage(daily=daily, intensity=si)

    def _read_indicators(self):
        base = Path(self.config.output_dir)
        topics_path, sentiment_path = base / INTENSITY_CSV, base / SENTIMENT_CSV
        topics = sentiment = None
        if topics_path.exists():
            frame = read_csv(topics_path)
            frame.index = pd.DatetimeIndex(pd.to_datetime(frame.pop("date")), name="date")
            counts = frame.pop("n_docs") if "n_docs" in frame else pd.Series(0, index=frame.index)
            topics = TopicIntensitySeries(values=frame, counts=counts)
        if sentiment_path.exists():
            frame = read_csv(sentiment_path)
            frame.index = pd.DatetimeIndex(pd.to_datetime(frame.pop("date")), name="date")
            daily = DailySentiment(sv=frame["sv"].rename("sv"), counts=frame["n_docs"])
            sentiment = SentimentStage(daily=daily, intensity=SentimentIntensitySeries(si=frame["si"], tau=self.config.tau))
        return topics, sentiment

    def run_features(self, topics: Optional[TopicStage] = None,
                     sentiment: Optional[SentimentStage] = None) -> FeatureStage:
        cfg = self.config
        if cfg.train_end is None:
            raise InputDataError("train_end is required for feature building (--train-end)")
        variants = list(cfg.variants)
        text_variants = [v for v in variants if v != "no_text"]
        intensity = topics.intensity if topics else None
        if text_variants and (topics is None or sentiment is None):
            stored_topics, stored_sentiment = self._read_indicators()
            intensity = intensity or stored_topics
            sentiment = sentiment or stored_sentiment
            if intensity is None or sentiment is None:
                raise InputDataError("indicator CSVs not found; run `topics` and `sentiment` first or use --full",
                                     path=str(Path(cfg.output_dir)))
        price = self._prices()

        aligned: Dict[str, IndicatorPanel] = {}
        for variant in text_variants:
            polarity = sentiment.daily.sv if variant == "raw_sentiment" else sentiment.intensity.si
            aligned[variant] = align_panel(price, intensity, polarity, cfg.price_name)
        if "no_text" in variants:
            if aligned:
                # same trading days as the text panels so DM comparisons line up
                ref = next(iter(aligned.values()))
                aligned["no_text"] = IndicatorPanel(frame=ref.frame[[cfg.price_name]].copy(),
                                                    raw_price=ref.raw_price, price_column=cfg.price_name)
            else:
                aligned["no_text"] = align_panel(price, price_column=cfg.price_name)

        panels: Dict[str, IndicatorPanel] = {}
        lags: Dict[str, LagSelection] = {}
        for variant in variants:
            panel = transform_series(aligned[variant], cfg.train_end, cfg.difference_price)
            selection = select_lags(panel, cfg.p_max, end=cfg.train_end)
            panels[variant], lags[variant] = panel, selection
            self.writer.save_csv(panel.to_frame(), f"panel_{variant}.csv", index=True)
            self.writer.save_csv(selection.to_rows(), f"lags_{variant}.csv", columns=["series", "p", "sic", "chosen"])
        return FeatureStage(panels=panels, lags=lags)

    def run_forecast(self, features: FeatureStage) -> List[ForecastReport]:
        cfg = self.config
        outcomes: List[HorizonOutcome] = []
        for variant, panel in features.panels.items():
            for spec in cfg.model_specs():
                for h in cfg.horizons:
                    outcome = backtest_horizon(panel, features.lags[variant], spec, cfg.train_end, h,
                                               variant=variant, seed=cfg.seed, normalized=cfg.rfe_normalized,
                                               fingerprint=self.writer.fingerprint)
                    self._write_outcome(outcome)
                    outcomes.append(outcome)
        reports = [o.report for o in outcomes]
        self.writer.save_csv(aggregate_rows(reports), RESULTS_CSV)
        self.writer.save_csv(feature_selection_matrix(outcomes), "feature_selection.csv", index=True)
        labels = sorted({report_label(r) for r in reports})
        if len(labels) > 1:
            self.write_dm_grid(reports, self._baseline(labels))
        return reports

    def _write_outcome(self, outcome: HorizonOutcome) -> None:
        report = outcome.report
        payload = report.to_dict()
        ok, err = validate_report_schema(payload)
        if not ok:
            raise InputDataError(f"report {report.key} failed schema validation: {err}")
        self.writer.save_json(payload, f"reports/{report.key}.json")
        self.writer.save_json(model_to_dict(outcome.model), f"models/{report.key}.json")
        if outcome.rfe is not None:
            self.writer.save_csv(outcome.rfe.to_rows(), f"rfe/{report.key}.csv",
                                 columns=["p", "rmse", "mae", "mape", "mean_score", "selected"])

    def _baseline(self, labels: List[str]) -> str:
        if self.config.dm_baseline:
            return self.config.dm_baseline
        preferred = [lab for lab in labels if lab.startswith("ada__") and lab.endswith("decayed_sentiment")]
        return preferred[0] if preferred else labels[0]

    def write_dm_grid(self, reports: List[ForecastReport], baseline: str) -> pd.DataFrame:
        grid = compare_models(reports, baseline, sorted({r.horizon for r in reports}), loss=self.config.dm_loss)
        self.writer.save_csv(grid, DM_GRID_CSV)
        return grid

    def run_dmtest(self, reports_dir: Optional[str] = None) -> pd.DataFrame:
        directory = Path(reports_dir) if reports_dir else Path(self.config.output_dir) / "reports"
        files = sorted(directory.glob("*.json"))
        if not files:
            raise InputDataError("no report JSON files found", path=str(directory))
        reports = [ForecastReport.from_dict(json.loads(f.read_text(encoding="utf-8"))) for f in files]
        labels = sorted({report_label(r) for r in reports})
        return self.write_dm_grid(reports, self._baseline(labels))
