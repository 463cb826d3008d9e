# cli.py
import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from configs import settings
from core import use_cases
from core.errors import InputDataError, PipelineError
from pipeline.synthetic import bundle_config, generate_bundle
from pipeline.validators import run_input_checks
from schemas.run_config import RunConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_INPUT = 2

# flag dest -> RunConfig field, where the names differ
_FLAG_FIELDS = {
    "headlines": "headlines_path",
    "prices": "prices_path",
    "lexicon": "lexicon_path",
    "stop_words": "stop_words_path",
    "topics_k": "k_range",
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value run configuration file")
    p.add_argument("--log-level", default=settings.LOG_LEVEL)
    p.add_argument("--headlines")
    p.add_argument("--prices")
    p.add_argument("--lexicon")
    p.add_argument("--stop-words")
    p.add_argument("--output-dir")
    p.add_argument("--date-column")
    p.add_argument("--text-column")
    p.add_argument("--price-name")
    p.add_argument("--seed")


def _add_text(p: argparse.ArgumentParser) -> None:
    p.add_argument("--topics-k", help="K range, e.g. 2..10 or 3,5,7")
    p.add_argument("--alpha")
    p.add_argument("--min-df")
    p.add_argument("--kappa")
    p.add_argument("--max-iter")
    p.add_argument("--tol")
    p.add_argument("--top-n")
    p.add_argument("--tau")
    p.add_argument("--stem", action="store_const", const=True, default=None)
    p.add_argument("--fit-embedding", action="store_const", const=True, default=None)


def _add_forecast(p: argparse.ArgumentParser) -> None:
    p.add_argument("--train-end")
    p.add_argument("--horizons", help="comma list, e.g. 1,2,3")
    p.add_argument("--p-max")
    p.add_argument("--models", help="comma list of tree, rf, ada, arx")
    p.add_argument("--variants", help="comma list of no_text, raw_sentiment, decayed_sentiment")
    p.add_argument("--no-text", action="store_true", help="price lags only")
    p.add_argument("--rf-trees")
    p.add_argument("--rfe-normalized", action="store_const", const=True, default=None)
    p.add_argument("--no-difference", dest="difference_price", action="store_const", const=False, default=None)
    p.add_argument("--dm-loss", choices=["squared", "absolute"])
    p.add_argument("--dm-baseline")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="headline-forecast",
                                     description="Headline-driven commodity price forecasting pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("topics", help="SeaNMF topics, coherence table and topic intensity CSV")
    _add_common(p)
    _add_text(p)

    p = sub.add_parser("sentiment", help="daily sentiment value and decayed intensity CSV")
    _add_common(p)
    _add_text(p)

    p = sub.add_parser("features", help="aligned panels and lag tables")
    _add_common(p)
    _add_forecast(p)
    p.add_argument("--tau")

    p = sub.add_parser("forecast", help="backtests, reports and DM grid")
    _add_common(p)
    _add_text(p)
    _add_forecast(p)
    p.add_argument("--full", action="store_true", help="run topics and sentiment in-process first")

    p = sub.add_parser("dmtest", help="DM grid from stored report JSON files")
    _add_common(p)
    p.add_argument("--reports-dir")
    p.add_argument("--dm-loss", choices=["squared", "absolute"])
    p.add_argument("--dm-baseline")

    p = sub.add_parser("synth", help="write a synthetic headline/price bundle")
    p.add_argument("--out", required=True)
    p.add_argument("--days", type=int, default=420)
    p.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    p.add_argument("--log-level", default=settings.LOG_LEVEL)
    return parser


_NON_CONFIG = {"command", "config", "log_level", "full", "no_text", "reports_dir"}


def load_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    overrides: Dict[str, Any] = {}
    for key, value in vars(args).items():
        if key in _NON_CONFIG or value is None:
            continue
        overrides[_FLAG_FIELDS.get(key, key)] = value
    config.update(overrides)
    if getattr(args, "no_text", False):
        config.variants = ["no_text"]
    return config


def _check_inputs(config: RunConfig, command: str, full: bool) -> None:
    need_headlines = command in ("topics", "sentiment") or (command == "forecast" and full)
    need_prices = command in ("features", "forecast")
    if command == "forecast" and config.variants == ["no_text"]:
        need_headlines = False
    result = run_input_checks(config.to_dict(), need_headlines=need_headlines, need_prices=need_prices)
    if not result["passed"]:
        raise InputDataError("invalid run inputs: " + "; ".join(result["issues"]))


def _run_synth(args: argparse.Namespace) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    bundle = generate_bundle(n_days=args.days, seed=args.seed)
    bundle.headlines.to_csv(out / "headlines.csv", index=False, lineterminator="\n")
    bundle.prices.to_csv(out / "prices.csv", index=False, lineterminator="\n")
    values = bundle_config(bundle, out)
    (out / "run.conf").write_text("".join(f"{k} = {v}\n" for k, v in values.items()), encoding="utf-8")
    logger.info("Synthetic bundle written to %s", out)
    return EXIT_OK


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "synth":
        return _run_synth(args)
    config = load_config(args)
    full = bool(getattr(args, "full", False))
    _check_inputs(config, args.command, full)
    logger.info("Running %s (config fingerprint %s)", args.command, config.fingerprint()[:12])
    if args.command == "topics":
        stage = use_cases.run_topics(config)
        logger.info("Topics done: K=%d, mean coherence %.4f", stage.model.n_topics, stage.summary.mean_coherence)
    elif args.command == "sentiment":
        use_cases.run_sentiment(config)
    elif args.command == "features":
        use_cases.run_features(config)
    elif args.command == "forecast":
        reports = use_cases.run_forecast(config, full=full)
        logger.info("Forecast done: %d reports", len(reports))
    elif args.command == "dmtest":
        use_cases.run_dmtest(config, reports_dir=args.reports_dir)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format="%(asctime)s [%(levelname)s] %(name)s - %(message)s",
    )
    try:
        return _dispatch(args)
    except InputDataError as exc:
        logger.exception("Input error: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PipelineError, ArithmeticError, ValueError) as exc:
        logger.exception("Computation error: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION


if __name__ == "__main__":
    sys.exit(main())
