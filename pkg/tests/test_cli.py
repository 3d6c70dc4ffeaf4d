"""Tests for the command-line interface."""

import json

import pandas as pd
import pytest

from specmeas.cli import RunConfig, main, parse_test_function
from specmeas.exceptions import ConfigError


def run(tmp_path, *argv, name="out.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out


def test_sample_cbe(tmp_path):
    """sample writes one record per draw with the config echo."""
    argv = "sample --ensemble cbe --n 6 --samples 5 --seed 11".split()
    code, out = run(tmp_path, *argv)
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["config"]["seed"] == 11
    assert payload["config"]["ensemble"] == "cbe"
    assert "version" in payload
    assert len(payload["records"]) == 5
    assert all(len(r["measure"]["angles"]) == 6 for r in payload["records"])


def test_same_seed_same_bytes(tmp_path):
    """A fixed seed reproduces the output byte for byte."""
    argv = "sample --ensemble so2n --n 3 --samples 4 --seed 5".split()
    _, out = run(tmp_path, *argv)
    first = out.read_bytes()
    _, out = run(tmp_path, *argv)
    assert out.read_bytes() == first


def test_sample_bizth_endpoints(tmp_path):
    """bizth case 3 draws carry atoms at both endpoints."""
    code, out = run(
        tmp_path, *"sample --ensemble bizth --case 3 --n 3 --samples 3 --seed 2".split()
    )
    assert code == 0
    for record in json.loads(out.read_text())["records"]:
        points = record["measure"]["points"]
        assert points[0] == 0.0
        assert points[-1] == 1.0


def test_sample_csv(tmp_path):
    """CSV output has one row per atom."""
    code, out = run(
        tmp_path,
        *"sample --ensemble unif2 --n 3 --samples 2 --seed 3 --format csv".split(),
        name="atoms.csv",
    )
    assert code == 0
    assert out.read_text().startswith("# {")
    frame = pd.read_csv(out, comment="#")
    assert list(frame.columns) == ["draw", "atom", "position", "weight"]
    assert frame.groupby("draw")["weight"].sum().tolist() == pytest.approx([1.0, 1.0])


def test_csv_needs_atoms(tmp_path):
    """Moment-only ensembles cannot be written as CSV."""
    code, _ = run(
        tmp_path,
        *"sample --ensemble uniform-circle --n 3 --seed 3 --format csv".split(),
        name="moments.csv",
    )
    assert code == 2


def test_missing_weight_shape(tmp_path):
    """dirichlet without a weight shape is a configuration error."""
    code, _ = run(tmp_path, *"sample --ensemble dirichlet --n 4 --seed 1".split())
    assert code == 2


def test_verify_exit_codes(tmp_path):
    """verify exits 0 on a pass and 4 on a negative control."""
    argv = "verify --suite eta --n 1 --samples 4000 --seed 9".split()
    code, out = run(tmp_path, *argv)
    assert code == 0
    assert json.loads(out.read_text())["passed"] is True
    code, out = run(tmp_path, *argv, "--negative-control", name="control.json")
    assert code == 4
    assert json.loads(out.read_text())["passed"] is False


def test_ldp_csv(tmp_path):
    """ldp CSV carries one row per N."""
    code, out = run(
        tmp_path,
        *"ldp --ensemble cbe --n-list 4,8 --x -0.9 --samples 10000 --seed 4".split(),
        "--format",
        "csv",
        name="rate.csv",
    )
    assert code == 0
    frame = pd.read_csv(out, comment="#")
    assert list(frame.columns) == ["inv_N", "estimate"]
    assert frame["inv_N"].tolist() == pytest.approx([0.25, 0.125])


def test_ldp_json_summary(tmp_path):
    """ldp JSON carries the fitted and theoretical rates."""
    code, out = run(
        tmp_path,
        *"ldp --ensemble dirichlet --weight-shape 1 --n-list 4,8 --x -0.9".split(),
        *"--samples 10000 --seed 4".split(),
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["config"]["a"] == 1.0
    assert payload["config"]["n_list"] == [4, 8]
    assert [r["N"] for r in payload["records"]] == [4, 8]
    assert payload["summary"]["theoretical"] == 0.0


def test_ldp_failures(tmp_path):
    """ldp maps numerical and configuration failures to exit codes."""
    argv = "ldp --ensemble cbe --n-list 4,8 --seed 4".split()
    code, _ = run(tmp_path, *argv, "--x", "0.99", "--samples", "10000")
    assert code == 3
    code, _ = run(tmp_path, *argv, "--x", "0.4", "--samples", "10")
    assert code == 2
    code, _ = run(
        tmp_path, *argv, "--x", "0.4", "--samples", "10000", "--test-function", "sin"
    )
    assert code == 2
    bad_sizes = "ldp --ensemble cbe --n-list 4,x --x 0.4 --seed 4".split()
    code, _ = run(tmp_path, *bad_sizes)
    assert code == 2


def test_version(capsys):
    """--version prints the package version and exits."""
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
    assert capsys.readouterr().out.strip()


def test_parse_test_function():
    """Test function names and trigonometric coefficients parse."""
    assert parse_test_function("re").name == "re"
    assert parse_test_function("cos3").degree == 3
    assert parse_test_function("x").mean == pytest.approx(0.5)
    assert parse_test_function("poly:0,0,1").mean == pytest.approx(0.375)
    with pytest.raises(ConfigError):
        parse_test_function("poly:a,b")


def test_run_config_validation():
    """RunConfig rejects incomplete or invalid settings."""
    with pytest.raises(ConfigError, match="--n"):
        RunConfig("sample", seed=1, ensemble="cbe")
    with pytest.raises(ConfigError, match="alpha"):
        RunConfig("verify", seed=1, n=3, suite="eta", alpha=2.0)
    with pytest.raises(ConfigError, match="unknown suite"):
        RunConfig("verify", seed=1, n=3, suite="gue")
