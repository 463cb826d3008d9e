# configs/settings.py
"""
Environment-overridable defaults. CLI flags and run config files take precedence.
"""
import os
from pathlib import Path

ROOT_DIR = Path(__file__).resolve().parent.parent
RESOURCES_DIR = ROOT_DIR / "resources"

STOP_WORDS_PATH = Path(os.getenv("FORECAST_STOP_WORDS", str(RESOURCES_DIR / "stopwords_en.txt")))
LEXICON_PATH = Path(os.getenv("FORECAST_LEXICON", str(RESOURCES_DIR / "sentiment_lexicon.tsv")))

LOG_LEVEL = os.getenv("FORECAST_LOG_LEVEL", "INFO")
DEFAULT_SEED = int(os.getenv("FORECAST_SEED", "42"))

# corpus / embed
MIN_DF = int(os.getenv("FORECAST_MIN_DF", "2"))
KAPPA = int(os.getenv("FORECAST_KAPPA", "1"))
EMBEDDING_X_MAX = 100.0
EMBEDDING_POWER = 0.75

# topics
K_MIN = int(os.getenv("FORECAST_K_MIN", "2"))
K_MAX = int(os.getenv("FORECAST_K_MAX", "10"))
ALPHA = float(os.getenv("FORECAST_ALPHA", "1.0"))
SEANMF_MAX_ITER = int(os.getenv("FORECAST_SEANMF_MAX_ITER", "300"))
SEANMF_TOL = float(os.getenv("FORECAST_SEANMF_TOL", "1e-6"))
DENOMINATOR_FLOOR = 1e-10
COHERENCE_EPSILON = 1e-12
TOP_N_KEYWORDS = int(os.getenv("FORECAST_TOP_N", "10"))

# sentiment
TAU = float(os.getenv("FORECAST_TAU", "7"))

# tsfeat
P_MAX = int(os.getenv("FORECAST_P_MAX", "10"))
AUTOCORR_WARNING = 0.97
HORIZONS = tuple(int(h) for h in os.getenv("FORECAST_HORIZONS", "1,2,3").split(","))

# learn
ADA_N_ESTIMATORS = int(os.getenv("FORECAST_ADA_T", "30"))
ADA_PHI = float(os.getenv("FORECAST_ADA_PHI", "0.05"))
ADA_POWER = int(os.getenv("FORECAST_ADA_POWER", "2"))
ADA_LEARNING_RATE = float(os.getenv("FORECAST_ADA_LR", "0.01"))
ADA_RELATIVE_DELTA = 1e-3
ADA_BETA_FLOOR = 1e-10
ADA_MAX_RETRIES = 3
RF_N_TREES = int(os.getenv("FORECAST_RF_TREES", "100"))
RF_FEATURE_FRACTION = float(os.getenv("FORECAST_RF_FEATURE_FRACTION", "1.0"))
RFE_VALIDATION_FRACTION = float(os.getenv("FORECAST_RFE_VALIDATION", "0.2"))
# sizes scoring within this fraction of the p-table spread of the best score count as ties
RFE_TIE_TOLERANCE = float(os.getenv("FORECAST_RFE_TIE_TOLERANCE", "0.05"))
DEFAULT_MODELS = tuple(os.getenv("FORECAST_MODELS", "rf,ada,arx").split(","))

# eval
DM_LOSS = os.getenv("FORECAST_DM_LOSS", "squared")
