"""Command line entry points: exit codes, determinism, error handling."""
import json

import pytest

from kmtheta.cli import main


@pytest.fixture
def lattice_file(tmp_path):
    path = tmp_path / "lat.json"
    path.write_text(json.dumps({
        "gram": [[2, 0, 0], [0, 0, 1], [0, 1, 0]],
        "u": ["0", "1", "0"], "u_prime": ["0", "0", "1"]}))
    return str(path)


def test_lattice_info(lattice_file, capsys):
    assert main(["lattice", "info", lattice_file, "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["signature"] == [2, 1]
    assert out["discriminant_order"] == 2


def test_poly_subcommand(capsys):
    assert main(["poly", "--count", "2,1", "--mode", "Q"]) == 0
    assert capsys.readouterr().out.strip()


def test_weil_subcommand(lattice_file, capsys):
    assert main(["weil", "--lattice", lattice_file, "--word", "ST"]) == 0
    assert capsys.readouterr().out.strip()


def test_theta_bad_radius_is_usage_error(lattice_file):
    assert main(["theta", "--lattice", lattice_file, "--tau", "1.0i",
                 "--poly-count", "2,0", "--radius", "-1"]) == 2


def test_theta_runs(lattice_file, capsys):
    assert main(["theta", "--lattice", lattice_file, "--tau", "0.3+1.1i",
                 "--poly-count", "2,0", "--json"]) == 0
    json.loads(capsys.readouterr().out)


def test_unknown_subcommand():
    assert main(["frobnicate"]) == 2


def test_missing_file_is_usage_error(tmp_path):
    assert main(["lattice", "info", str(tmp_path / "nope.json")]) == 2


def test_verify_single_suite(tmp_path, capsys):
    out1 = str(tmp_path / "r1.json")
    out2 = str(tmp_path / "r2.json")
    assert main(["verify", "--only", "weil", "--output", out1]) == 0
    assert main(["verify", "--only", "weil", "--output", out2]) == 0
    a, b = open(out1).read(), open(out2).read()
    assert a == b  # byte-identical reports across runs
    recs = json.loads(a)["records"]
    assert recs and all(r["pass"] for r in recs)


def test_verify_fails_under_impossible_tolerance(monkeypatch):
    monkeypatch.setenv("KMTHETA_TOL_SCALE", "1e-20")
    assert main(["verify", "--only", "weil"]) == 1
