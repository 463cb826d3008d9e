from pipeline.validators import run_input_checks, validate_report_schema, validate_run_config_schema
from schemas.run_config import RunConfig


def _report():
    metrics = {"rmse": 0.1, "mae": 0.05, "mape": 12.0}
    return {
        "model": "ada",
        "variant": "decayed_sentiment",
        "horizon": 1,
        "dates": ["2021-01-04"],
        "y_true": [0.4],
        "y_pred": [0.5],
        "y_true_raw": [60.0],
        "y_pred_raw": [60.2],
        "metrics": metrics,
        "metrics_raw": metrics,
        "selected_features": ["dprice(t-1)"],
        "rfe_score_mode": "raw",
        "config_fingerprint": "abc",
        "params": {"kind": "ada"},
    }


def test_report_schema_accepts_valid_report():
    ok, err = validate_report_schema(_report())
    assert ok is True
    assert err is None


def test_report_schema_rejects_bad_variant_and_horizon():
    bad = _report()
    bad["variant"] = "tweets"
    ok, err = validate_report_schema(bad)
    assert ok is False
    assert "tweets" in err

    bad = _report()
    bad["horizon"] = 0
    assert validate_report_schema(bad)[0] is False


def test_run_config_schema_defaults_pass():
    ok, _ = validate_run_config_schema(RunConfig().to_dict())
    assert ok is True


def test_run_config_schema_rejects_unknown_model():
    config = RunConfig().to_dict()
    config["models"] = ["svm"]
    ok, err = validate_run_config_schema(config)
    assert ok is False
    assert "svm" in err


def test_input_checks_flag_missing_files(tmp_path):
    config = RunConfig(headlines_path=str(tmp_path / "missing.csv")).to_dict()
    result = run_input_checks(config, need_headlines=True, need_prices=True)
    assert result["passed"] is False
    assert f"not_found_headlines_path: {tmp_path / 'missing.csv'}" in result["issues"]
    assert "missing_prices_path" in result["issues"]
    assert "missing_train_end" in result["issues"]


def test_input_checks_pass_with_existing_files(tmp_path):
    headlines = tmp_path / "headlines.csv"
    headlines.write_text("date,headline\n2021-01-04,Oil rises\n", encoding="utf-8")
    result = run_input_checks(RunConfig(headlines_path=str(headlines)).to_dict(), need_headlines=True)
    assert result == {"issues": [], "passed": True}
