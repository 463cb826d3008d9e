from typing import Optional, Sequence

from configs import settings
from pipeline.sentiment import headline_polarity, load_lexicon
from schemas.indicators import SentimentLexicon


class LexiconScorer:
    """Polarity scorer that wraps the tab-separated lexicon and headline_polarity."""

    def __init__(self, lexicon: Optional[SentimentLexicon] = None, path=None):
        self.lexicon = lexicon or load_lexicon(path or settings.LEXICON_PATH)

    def score(self, tokens: Sequence[str]) -> float:
        return headline_polarity(tokens, self.lexicon)
