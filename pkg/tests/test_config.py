import argparse

import pytest
from pydantic import ValidationError as PydanticValidationError

from cli.deps import load_run_config, parse_overrides, parse_value, read_config_file
from core.config import Settings, settings
from core.errors import ConfigurationError
from schemas.config import RunConfig, parse_ladder
from services.audit import make_config_hash, verify_config_hash


def test_settings_defaults():
    assert settings.APP_NAME == "hyperfoil"
    assert settings.MASS_NORMALIZATION == "double"
    assert settings.QUADRATURE == "midpoint"


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("HYPERFOIL_SLICE_NODES", "64")
    monkeypatch.setenv("HYPERFOIL_OUT", "reports")
    fresh = Settings()
    assert fresh.SLICE_NODES == 64
    assert fresh.OUT == "reports"


def test_ladder_range_includes_stop():
    assert parse_ladder("4:8:0.5") == [4.0, 4.5, 5.0, 5.5, 6.0, 6.5, 7.0, 7.5, 8.0]
    assert parse_ladder([3.0, 5.0]) == [3.0, 5.0]
    assert parse_ladder(None) is None
    with pytest.raises(ValueError):
        parse_ladder("4:8")
    with pytest.raises(ValueError):
        parse_ladder("8:4:1")


@pytest.mark.parametrize("bad", [
    {"cfl": 0.6},
    {"preset": "burgers"},
    {"quadrature": "simpson"},
    {"mass_normalization": "triple"},
    {"snapshot_interval": 0.5},
    {"toy_G": 0.8},
    {"grid": 3},
])
def test_run_config_rejects(bad):
    with pytest.raises(PydanticValidationError):
        RunConfig(**bad)


def test_override_values_are_typed():
    values = parse_overrides(["dr=0.01", "T_ladder=[3, 4]", "preset=free_kg", "quasilinear=true"])
    assert values == {"dr": 0.01, "T_ladder": [3, 4], "preset": "free_kg", "quasilinear": True}
    assert parse_value("3:5:1") == "3:5:1"
    with pytest.raises(ConfigurationError):
        parse_overrides(["dr"])


def test_config_files(tmp_path):
    toml = tmp_path / "run.toml"
    toml.write_text('dr = 0.04\nT_ladder = "3:4:0.5"\n', encoding="utf-8")
    assert read_config_file(str(toml)) == {"dr": 0.04, "T_ladder": "3:4:0.5"}

    as_json = tmp_path / "run.json"
    as_json.write_text('{"epsilon": 0.2}', encoding="utf-8")
    assert read_config_file(str(as_json)) == {"epsilon": 0.2}

    broken = tmp_path / "broken.toml"
    broken.write_text("dr = = 1\n", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        read_config_file(str(broken))
    with pytest.raises(ConfigurationError):
        read_config_file(str(tmp_path / "none.toml"))


def test_load_run_config_precedence(tmp_path):
    toml = tmp_path / "run.toml"
    toml.write_text('preset = "null_wave"\nepsilon = 0.1\ndr = 0.04\n', encoding="utf-8")
    args = argparse.Namespace(config=str(toml), overrides=["dr=0.03"], seed=7)
    config = load_run_config(args, preset="free_kg", epsilon=None)
    assert config.preset == "free_kg"
    assert config.epsilon == 0.1
    assert config.dr == 0.03
    assert config.seed == 7

    with pytest.raises(ConfigurationError):
        load_run_config(argparse.Namespace(config=None, overrides=["cfl=2"], seed=None))


def test_config_hash_is_canonical():
    a = make_config_hash({"dr": 0.02, "preset": "free_wave"})
    b = make_config_hash({"preset": "free_wave", "dr": 0.02})
    assert a == b
    assert len(a) == 64
    assert a != make_config_hash({"dr": 0.03, "preset": "free_wave"})
    assert verify_config_hash({"preset": "free_wave", "dr": 0.02}, a)
    assert not verify_config_hash({"preset": "free_kg", "dr": 0.02}, a)
