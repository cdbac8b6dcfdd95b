import json

import pytest

from main import build_parser, main
from services.nullcond import dt_squared_form, q0_form
from services.tensor_io import dump_tensors


@pytest.fixture
def out_dir(tmp_path):
    return str(tmp_path / "out")


def _tensor_file(tmp_path, tensors, name="system.txt"):
    path = tmp_path / name
    path.write_text(dump_tensors(tensors), encoding="utf-8")
    return str(path)


def test_parser_requires_a_subcommand():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_list_identities(capsys):
    assert main(["commutators", "--list"]) == 0
    listed = capsys.readouterr().out.splitlines()
    assert len(listed) >= 15
    assert any("informational" in line for line in listed)


def test_info(capsys):
    assert main(["info"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["app"]["name"] == "hyperfoil"
    assert "coupled_wkg" in info["presets"]


def test_nullcheck_passes_for_null_form(tmp_path, out_dir):
    path = _tensor_file(tmp_path, q0_form())
    assert main(["nullcheck", path, "--samples", "30", "--out", out_dir]) == 0
    assert (tmp_path / "out" / "nullcheck.csv").is_file()


def test_nullcheck_fails_for_non_null_form(tmp_path, out_dir, capsys):
    path = _tensor_file(tmp_path, dt_squared_form())
    assert main(["nullcheck", path, "--samples", "30", "--out", out_dir]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_nullcheck_bad_input(tmp_path, out_dir):
    bad = tmp_path / "bad.txt"
    bad.write_text("system 1 0\nP 1 0 0 1 x 1.0\n", encoding="utf-8")
    assert main(["nullcheck", str(bad), "--out", out_dir]) == 2
    assert main(["nullcheck", str(tmp_path / "missing.txt"), "--out", out_dir]) == 2


def test_missing_config_file(tmp_path, out_dir):
    path = _tensor_file(tmp_path, q0_form())
    assert main(["nullcheck", path, "--config", str(tmp_path / "run.toml"), "--out", out_dir]) == 2


def test_unknown_config_key(tmp_path, out_dir):
    path = _tensor_file(tmp_path, q0_form())
    assert main(["nullcheck", path, "--set", "grid=7", "--out", out_dir]) == 2


def test_dry_run_prints_resolved_config(tmp_path, out_dir, capsys):
    config = tmp_path / "run.toml"
    config.write_text('preset = "free_kg"\ndr = 0.04\n', encoding="utf-8")
    code = main(["simulate", "--config", str(config), "--set", "epsilon=0.02", "--seed", "5",
                 "--dry-run", "--out", out_dir])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["config"]["preset"] == "free_kg"
    assert payload["config"]["dr"] == 0.04
    assert payload["config"]["epsilon"] == 0.02
    assert payload["config"]["seed"] == 5
    assert payload["cli"]["subcommand"] == "simulate"


@pytest.mark.slow
def test_commutator_battery_exit_codes(out_dir, capsys):
    assert main(["commutators", "--samples", "5", "--out", out_dir]) == 0
    assert main(["commutators", "--samples", "5", "--tol", "1e-20", "--out", out_dir]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_simulate_rerun_writes_identical_csv(tmp_path):
    argv = ["simulate", "--preset", "free_wave", "--set", "dr=0.05", "--set", "T_ladder=3:4:0.25"]
    first, second = tmp_path / "a", tmp_path / "b"
    assert main(argv + ["--out", str(first)]) == 0
    assert main(argv + ["--out", str(second)]) == 0
    names = sorted(p.name for p in first.glob("*.csv"))
    assert "run.csv" in names and "slices.csv" in names
    assert names == sorted(p.name for p in second.glob("*.csv"))
    for name in names:
        assert (first / name).read_bytes() == (second / name).read_bytes(), name
