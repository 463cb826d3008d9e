from typing import Optional

import pandas as pd

from core.ports import OutputSink
from core.services import FeatureStage, ForecastingPipelineService, SentimentStage, TopicStage
from schemas.run_config import RunConfig


def run_topics(config: RunConfig, writer: Optional[OutputSink] = None) -> TopicStage:
    return ForecastingPipelineService(config, writer=writer).run_topics()


def run_sentiment(config: RunConfig, writer: Optional[OutputSink] = None) -> SentimentStage:
    return ForecastingPipelineService(config, writer=writer).run_sentiment()


def run_features(config: RunConfig, writer: Optional[OutputSink] = None) -> FeatureStage:
    return ForecastingPipelineService(config, writer=writer).run_features()


def run_forecast(config: RunConfig, full: bool = False, writer: Optional[OutputSink] = None):
    """
    Features -> backtests -> DM grid. With full=True the topic and sentiment stages run
    in-process first. Any failure removes every file this run wrote before re-raising.
    """
    service = ForecastingPipelineService(config, writer=writer)
    try:
        topics = sentiment = None
        if full and any(v != "no_text" for v in config.variants):
            topics = service.run_topics()
            sentiment = service.run_sentiment()
        features = service.run_features(topics, sentiment)
        return service.run_forecast(features)
    except Exception:
        service.writer.rollback()
        raise


def run_dmtest(config: RunConfig, reports_dir: Optional[str] = None,
               writer: Optional[OutputSink] = None) -> pd.DataFrame:
    return ForecastingPipelineService(config, writer=writer).run_dmtest(reports_dir)
