import json
import subprocess
import sys

import pytest

from hermcode.cli import RunConfig, UsageError, main


def run_cli(capsys, *argv):
    status = main(list(argv))
    return status, capsys.readouterr().out


def test_surface_t3(capsys):
    status, out = run_cli(capsys, "surface", "--t", "3", "--output-format", "json")
    d = json.loads(out)
    assert status == 0
    assert d["surface"]["points"] == 280 and d["surface"]["tangent_planes"] == 280
    assert d["surface"]["generators"] == 112
    assert d["provenance"]["poly"] == "x^2+2x+2" and d["provenance"]["seed"] == 0


def test_weights_csv(capsys):
    status, out = run_cli(capsys, "weights", "--t", "2", "--output-format", "csv")
    body = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert status == 0 and body[0] == "weight,codeword_count,projective_count"
    rows = [list(map(int, ln.split(","))) for ln in body[1:]]
    assert 0 < len(rows) <= 45
    assert all(w % 2 == 0 and n > 0 for w, n, _ in rows)
    assert [w for w, _, _ in rows[:5]] == [22, 24, 26, 28, 30]
    assert "# poly=x^2+x+1" in out


@pytest.mark.parametrize("argv", [
    ["census", "--t", "3", "--mode", "exhaustive"],
    ["weights", "--t", "2", "--mode", "sample"],
    ["surface", "--t", "2", "--output-format", "csv"],
    ["census", "--t", "2", "--sample-size", "0"],
    ["census", "--t", "2", "--shards", "0"],
    ["census", "--t", "9"],
    ["verify", "--t", "2", "--mode", "sample"],
    ["census"],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig(t=3, command="census", mode="exhaustive")
    assert RunConfig(t=3, command="census").mode == "stratified"
    assert RunConfig(t=2, command="census").mode == "exhaustive"


def test_census_json_is_deterministic(capsys):
    _, a = run_cli(capsys, "census", "--t", "2", "--output-format", "json")
    _, b = run_cli(capsys, "census", "--t", "2", "--output-format", "json")
    assert a == b
    d = json.loads(a)
    assert d["provenance"]["seed"] == 0 and d["provenance"]["poly"] == "x^2+x+1"


def test_sample_independent_of_shards(capsys):
    argv = ["census", "--t", "3", "--mode", "sample", "--sample-size", "40000", "--seed", "7", "--output-format", "json"]
    _, one = run_cli(capsys, *argv, "--shards", "1")
    _, two = run_cli(capsys, *argv, "--shards", "2")
    _, again = run_cli(capsys, *argv, "--shards", "1")
    assert one == again
    a, b = json.loads(one), json.loads(two)
    assert a["rows"] == b["rows"] and a["provenance"]["shards"] == 1 and b["provenance"]["shards"] == 2


def test_output_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("HERMCODE_OUTPUT_DIR", str(tmp_path))
    status, out = run_cli(capsys, "weights", "--t", "2", "--output-format", "json")
    assert status == 0 and out == ""
    d = json.loads((tmp_path / "weights-t2.json").read_text())
    assert d["distribution"]["counts"]["24"] == 2970
    run_cli(capsys, "surface", "--t", "2", "--output", "sub/surf.txt")
    assert "points |X|             45" in (tmp_path / "sub" / "surf.txt").read_text()


def test_families_and_conjecture(capsys):
    status, out = run_cli(capsys, "families", "--t", "2", "--output-format", "json")
    d = json.loads(out)
    assert status == 0
    assert [f["constructed_count"] for f in d["families"]] == [360, 270, 360, 1440]
    status, out = run_cli(capsys, "conjecture", "--t", "2")
    assert status == 0 and "fourth weight 28" in out and "fifth weight 30" in out


def test_census_text_layout(capsys):
    _, out = run_cli(capsys, "census", "--t", "2")
    assert "paper says" in out and "paper F4" in out and "observed" in out
    assert "VIOLATION type 10" in out


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "hermcode", "surface", "--t", "2"], capture_output=True, text=True)
    assert res.returncode == 0 and "points |X|             45" in res.stdout


@pytest.mark.slow
def test_verify_t2_exit_status(capsys):
    """verify runs every acceptance check; the type-10 cone row fails, so the exit status is 1."""
    status, out = run_cli(capsys, "verify", "--t", "2", "--output-format", "json")
    d = json.loads(out)
    results = {a["id"]: a["ok"] for a in d["acceptance"]}
    assert sorted(results) == list(range(1, 11))
    assert status == (0 if all(results.values()) else 1)
    assert not results[4]
    assert all(ok for cid, ok in results.items() if cid != 4)
