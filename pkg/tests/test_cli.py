import json
import subprocess
import sys

import pytest

from sobscale.cli import main

BRACKET_M0 = json.dumps({"m": 0, "terms": [{"k_factor": {"family": "bracket_power", "s": 1}}]})


def run(tmp_path, *argv, name="r.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out


def test_suite_theorem2(tmp_path):
    code, out = run(tmp_path, "suite", "--preset", "theorem2", "--seed", "42")
    assert code == 0
    report = json.loads(out.read_text())
    assert report["schema"] == "sobscale/1" and report["pass"] is True
    for r in report["results"]["theorem2"]["reports"]:
        assert r["max_rel_deviation"] <= 1e-12
    meta = json.loads((tmp_path / "r.json.meta.json").read_text())
    assert "created" in meta and "created" not in out.read_text()


def test_pdo_apply_identity(tmp_path):
    code, out = run(tmp_path, "pdo-apply", "--n", "2", "--N", "4", "--seed", "3")
    report = json.loads(out.read_text())
    assert code == 0
    assert report["results"]["residual_vs_input"] <= 1e-13
    assert report["results"]["residual_vs_direct_sum"] <= 1e-12


def test_pdo_apply_inline_symbol(tmp_path):
    spec = json.dumps({"m": 1, "terms": [{"k_factor": {"family": "bracket_power", "s": 1}, "x_modes": [{"q": [1], "coeff": [0.3, 0]}]}]})
    code, out = run(tmp_path, "pdo-apply", "--N", "6", "--symbol", spec)
    assert code == 0
    assert json.loads(out.read_text())["config"]["symbol"]["m"] == 1


def test_symbol_file(tmp_path):
    path = tmp_path / "sym.json"
    path.write_text(BRACKET_M0)
    code, out = run(tmp_path, "symbol-check", "--N", "16", "--symbol", str(path))
    assert code == 1  # declared order too low: slope 1 exceeds 0
    report = json.loads(out.read_text())
    assert report["pass"] is False and report["checks"][0]["pass"] is False


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["pdo-apply", "--N", "4", "--M", "16"], "Nyquist"),
        (["pdo-apply", "--N", "4", "--M", "15"], "Nyquist"),
        (["pdo-apply", "--n", "4"], "[1, 3]"),
        (["pdo-apply", "--n", "2", "--N", "33"], "limit"),
        (["pdo-apply", "--n", "3", "--N", "9"], "limit"),
        (["verify-interp", "--s0", "1.6", "--s1", "3"], "straddle"),
        (["pdo-apply", "--symbol", "{not json"], ""),
    ],
)
def test_usage_errors(tmp_path, capsys, argv, needle):
    code, out = run(tmp_path, *argv)
    assert code == 2
    assert needle in capsys.readouterr().err
    assert not out.exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["ro-analyze", "--phi", '{"family": "power_log", "s": 2, "r": 1}'],
        ["verify-interp", "--n", "2", "--N", "4", "--trials", "20"],
        ["verify-duality", "--trials", "50", "--s", "0.5", "1.5"],
        ["mapping-scan", "--radii", "4", "8"],
        ["fredholm", "--N", "8", "--s", "0", "1", "2.5"],
        ["a-scale", "--radii", "4", "8", "--trials", "20"],
        ["symbol-check", "--N", "16"],
    ],
)
def test_commands_pass_and_are_deterministic(tmp_path, argv):
    code1, out1 = run(tmp_path, *argv, name="a.json")
    code2, out2 = run(tmp_path, *argv, name="b.json")
    assert code1 == code2 == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_csv_output(tmp_path):
    code, out = run(tmp_path, "mapping-scan", "--radii", "4", "8", "--format", "csv", name="scan.csv")
    lines = out.read_text().splitlines()
    assert code == 0 and lines[0] == "N,opnorm" and len(lines) == 3


def test_threads_do_not_change_report(tmp_path, monkeypatch):
    monkeypatch.setenv("SOBSCALE_THREADS", "1")
    _, a = run(tmp_path, "suite", "--preset", "all", "--seed", "7", "--trials", "20", name="a.json")
    monkeypatch.setenv("SOBSCALE_THREADS", "4")
    _, b = run(tmp_path, "suite", "--preset", "all", "--seed", "7", "--trials", "20", name="b.json")
    assert a.read_bytes() == b.read_bytes()


def test_stdout_and_module_entry(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "sobscale", "fredholm", "--N", "6"],
        capture_output=True,
        text=True,
        cwd=tmp_path,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "fredholm"
