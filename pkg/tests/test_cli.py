import json

import pytest

from towerlab.cli import EXIT_DOMAIN, EXIT_OK, EXIT_PRECISION, EXIT_USAGE, run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_ideals(capsys):
    code, out, _ = call(capsys, "ideals", "--D", "-23", "--n", "2")
    assert code == EXIT_OK
    assert out["classes"] == 3 and out["counts"] == [0, 1, 1]


def test_wprep_file(capsys, tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"p": 5, "coeffs": [5, 5, 1]}))
    code, out, _ = call(capsys, "wprep", "--p", "5", "--series", str(path))
    assert code == EXIT_OK
    assert (out["mu"], out["lambda"], out["distinguished"]) == (0, 2, [5, 5, 1])


def test_wprep_planted(capsys):
    code, out, _ = call(capsys, "wprep", "--p", "7", "--seed", "4", "--trunc", "32", "--prec", "12")
    assert code == EXIT_OK and out["reconstructs"]
    assert (out["mu"], out["lambda"]) == (out["planted"]["mu"], out["planted"]["lambda"])


def test_average(capsys):
    code, out, _ = call(capsys, "average", "--curve", "11a", "--D", "-4", "--p", "5", "--c", "1", "--q", "25")
    assert code == EXIT_OK
    assert out["orbit_size"] == 4 and out["verdict"] == "all nonzero"


def test_lvalue_exceptional(capsys):
    code, out, _ = call(capsys, "lvalue", "--curve", "11a", "--D", "-7", "--p", "5")
    assert code == EXIT_OK
    assert out["epsilon"]["self_dual_sign"] == -1 and out["abs_L"] < 1e-6


def test_other_commands_run(capsys, tmp_path):
    assert call(capsys, "degrees", "--p", "5", "--seed", "1", "--trunc", "24", "--prec", "12")[0] == EXIT_OK
    assert call(capsys, "specialize", "--p", "5", "--seed", "1", "--trunc", "24", "--prec", "12")[0] == EXIT_OK
    code, out, _ = call(capsys, "chars", "--D", "-4", "--p", "5", "--k", "2", "--n", "2")
    assert code == EXIT_OK
    code, out, _ = call(capsys, "basechange", "--p", "5", "--seed", "2", "--trunc", "48", "--prec", "12", "--nmax", "1")
    assert code == EXIT_OK and out["pass"]


def test_verify_family_filter(capsys):
    code, out, _ = call(capsys, "verify", "--family", "basechange", "--nmax", "2", "--count", "2")
    assert code == EXIT_OK
    assert [f["family"] for f in out["families"]] == ["basechange"]
    assert all("base_degree" in r for r in out["families"][0]["rows"])


def test_verify_planted_violation_exits_1(capsys):
    code, out, _ = call(capsys, "verify", "--family", "wd2", "--count", "4", "--plant-violation")
    assert code == EXIT_DOMAIN and not out["pass"]


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["bogus"], EXIT_USAGE),
        ([], EXIT_USAGE),
        (["ideals", "--D", "-4", "--n", "2", "--frobnicate"], EXIT_USAGE),
        (["wprep"], EXIT_USAGE),
        (["ideals", "--D", "5", "--n", "2"], EXIT_DOMAIN),
        (["chars", "--D", "-15", "--p", "5"], EXIT_DOMAIN),
        (["wprep", "--p", "6"], EXIT_DOMAIN),
        (["wprep", "--p", "5", "--series", "/nonexistent/series.json"], EXIT_PRECISION),
    ],
)
def test_exit_codes(capsys, argv, expected):
    assert run(argv) == expected
    capsys.readouterr()


def test_precision_error_exit(capsys, tmp_path):
    path = tmp_path / "zero.json"
    path.write_text(json.dumps({"p": 5, "coeffs": [0, 0]}))
    code, _, err = call(capsys, "wprep", "--series", str(path))
    assert code == EXIT_PRECISION
    assert json.loads(err)["error"] == "InsufficientPrecision"


def test_env_override(capsys, monkeypatch):
    monkeypatch.setenv("TOWERLAB_P", "7")
    code, out, _ = call(capsys, "wprep", "--seed", "1", "--trunc", "24", "--prec", "10")
    assert code == EXIT_OK and out["p"] == 7
    code, out, _ = call(capsys, "wprep", "--p", "5", "--seed", "1", "--trunc", "24", "--prec", "10")
    assert out["p"] == 5
    monkeypatch.setenv("TOWERLAB_P", "seven")
    assert run(["wprep"]) == EXIT_USAGE
    capsys.readouterr()


def test_output_file_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        argv = ["verify", "--seed", "5", "--count", "2", "--nmax", "1", "--ideal-nmax", "200", "--out", str(path)]
        assert run(argv) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert capsys.readouterr().out == ""
