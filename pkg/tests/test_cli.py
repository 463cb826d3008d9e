import json

import pytest

from cli import EXIT_INPUT, EXIT_OK, build_parser, load_config, main
from services.storage_service import read_csv, read_fingerprint

SMALL = ["--topics-k", "3..4", "--max-iter", "60", "--models", "tree,arx", "--horizons", "1,2", "--p-max", "2"]


@pytest.fixture(scope="module")
def bundle_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("bundle")
    assert main(["synth", "--out", str(out), "--days", "200", "--seed", "3"]) == EXIT_OK
    return out


def test_synth_writes_inputs(bundle_dir):
    for name in ("headlines.csv", "prices.csv", "run.conf"):
        assert (bundle_dir / name).exists()
    assert read_fingerprint(bundle_dir / "prices.csv") is None
    assert "train_end = " in (bundle_dir / "run.conf").read_text(encoding="utf-8")


def test_flags_override_config_file(bundle_dir):
    args = build_parser().parse_args(["forecast", "--config", str(bundle_dir / "run.conf"), "--topics-k", "3,5",
                                      "--no-text", "--seed", "11"])
    config = load_config(args)
    assert config.k_range == [3, 5]
    assert config.variants == ["no_text"]
    assert config.seed == 11
    assert config.headlines_path == str((bundle_dir / "headlines.csv").resolve())


def _assert_text_beats_price_only(results):
    h1 = results[results["h"] == 1]
    for model, rows in h1.groupby("model"):
        base = rows.loc[rows["variant"] == "no_text", "rmse"].item()
        for variant in ("raw_sentiment", "decayed_sentiment"):
            assert rows.loc[rows["variant"] == variant, "rmse"].item() <= base, (model, variant)


def test_full_forecast_end_to_end(bundle_dir):
    conf = str(bundle_dir / "run.conf")
    out = bundle_dir / "output"
    assert main(["forecast", "--config", conf, "--full", *SMALL]) == EXIT_OK

    for name in ("topics.csv", "coherence.csv", "topic_intensity.csv", "sentiment.csv", "results.csv",
                 "feature_selection.csv", "dm_grid.csv", "panel_no_text.csv", "lags_decayed_sentiment.csv",
                 "seanmf/W.txt", "seanmf/meta.txt"):
        assert (out / name).exists(), name
    results = read_csv(out / "results.csv")
    assert len(results) == 2 * 3 * 2
    assert set(results["variant"]) == {"no_text", "raw_sentiment", "decayed_sentiment"}
    report = json.loads((out / "reports" / "arx__decayed_sentiment__h1.json").read_text(encoding="utf-8"))
    assert report["config_fingerprint"] == read_fingerprint(out / "results.csv")
    assert (out / "models" / "tree__no_text__h2.json").exists()
    _assert_text_beats_price_only(results)

    grid = read_csv(out / "dm_grid.csv")
    assert set(grid["direction"]) == {"better", "worse"}
    assert len(grid) == 5 * 2 * 2

    first = {p.name: p.read_bytes() for p in out.glob("*.csv")}
    assert main(["forecast", "--config", conf, "--full", *SMALL]) == EXIT_OK
    assert {p.name: p.read_bytes() for p in out.glob("*.csv")} == first

    assert main(["dmtest", "--config", conf, "--dm-baseline", "tree__no_text"]) == EXIT_OK
    regrid = read_csv(out / "dm_grid.csv")
    assert set(regrid["baseline"]) == {"tree__no_text"}


def test_default_bundle_text_models_beat_price_only(tmp_path):
    bundle = tmp_path / "bundle"
    assert main(["synth", "--out", str(bundle)]) == EXIT_OK
    code = main(["forecast", "--config", str(bundle / "run.conf"), "--full", "--horizons", "1"])
    assert code == EXIT_OK
    results = read_csv(bundle / "output" / "results.csv")
    assert set(results["model"]) == {"rf", "ada", "arx"}
    _assert_text_beats_price_only(results)


def test_price_only_forecast(bundle_dir, tmp_path):
    conf = str(bundle_dir / "run.conf")
    code = main(["forecast", "--config", conf, "--no-text", "--models", "arx", "--horizons", "1",
                 "--output-dir", str(tmp_path)])
    assert code == EXIT_OK
    results = read_csv(tmp_path / "results.csv")
    assert list(results["variant"]) == ["no_text"]
    assert not (tmp_path / "dm_grid.csv").exists()


def test_missing_input_file_exits_with_input_code(tmp_path):
    code = main(["forecast", "--headlines", str(tmp_path / "none.csv"), "--prices", str(tmp_path / "none.csv"),
                 "--train-end", "2020-01-01", "--full", "--output-dir", str(tmp_path / "out")])
    assert code == EXIT_INPUT


def test_failed_forecast_leaves_no_outputs(bundle_dir, tmp_path):
    conf = str(bundle_dir / "run.conf")
    code = main(["forecast", "--config", conf, "--no-text", "--models", "arx", "--train-end", "2030-01-01",
                 "--output-dir", str(tmp_path / "out")])
    assert code == EXIT_INPUT
    assert list((tmp_path / "out").rglob("*.csv")) == []
