import pytest

from core.errors import InputDataError
from schemas.run_config import RunConfig


def test_from_file_parses_lists_and_scalars(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text(
        "# synthetic run\n"
        "k_range = 3..5\n"
        "horizons = 1,3\n"
        "models = rf, arx\n"
        "tau = 5.5\n"
        "stem = yes\n"
        "train_end = 2016-01-04\n",
        encoding="utf-8",
    )
    config = RunConfig.from_file(path)
    assert config.k_range == [3, 4, 5]
    assert config.horizons == [1, 3]
    assert config.models == ["rf", "arx"]
    assert config.tau == 5.5
    assert config.stem is True
    assert config.train_end == "2016-01-04"


def test_bad_config_lines(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("k_range = 3..5\nnot a setting\n", encoding="utf-8")
    with pytest.raises(InputDataError) as info:
        RunConfig.from_file(path)
    assert info.value.row == 2
    with pytest.raises(InputDataError):
        RunConfig().update({"colour": "red"})
    with pytest.raises(InputDataError):
        RunConfig().update({"p_max": "three"})
    with pytest.raises(InputDataError):
        RunConfig().update({"k_range": "3..x"})
    with pytest.raises(InputDataError):
        RunConfig.from_file(tmp_path / "missing.conf")


def test_fingerprint_tracks_settings():
    a, b = RunConfig(), RunConfig()
    assert a.fingerprint() == b.fingerprint()
    assert len(a.fingerprint()) == 64
    b.update({"seed": "8"})
    assert a.fingerprint() != b.fingerprint()


def test_model_specs_carry_forest_size():
    config = RunConfig().update({"models": "tree,rf", "rf_trees": "7"})
    specs = config.model_specs()
    assert [s.kind for s in specs] == ["tree", "rf"]
    assert specs[1].params["n_trees"] == 7
    with pytest.raises(InputDataError):
        RunConfig(models=["svm"]).model_specs()
