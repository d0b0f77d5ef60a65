import json

import pytest

from flagstar import checks
from flagstar.cli import RunConfig, UsageError, cmd_run, main


def write_config(tmp_path, **data):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_sl2(tmp_path, capsys):
    cfg = write_config(tmp_path, n=2, dims=[1], max_degree=4)
    code, out, _ = run(["run", "--config", cfg, "--out", str(tmp_path / "r")], capsys)
    assert code == 0
    summary = json.loads((tmp_path / "r" / "summary.json").read_text())
    assert summary["schema"] == "flagstar/1"
    assert summary["values"]["T(eta^E12 eta^E21)"] == "-1/6"
    assert summary["counts"]["fail"] == 0
    names = [c["name"] for c in summary["checks"]]
    assert len(names) == len(set(names)) == len(checks.CHECKS)
    assert all(c["anchor"] for c in summary["checks"])
    pivots = (tmp_path / "r" / "gram_pivots.csv").read_text().splitlines()[1:]
    assert all(not row.split(",")[-1].startswith("-") for row in pivots)
    assert "pass" in out


def test_run_p2_reports_bfr(tmp_path, capsys):
    cfg = write_config(tmp_path, n=3, dims=[1], max_degree=3, checks=["bfr"])
    code, out, _ = run(["run", "--config", cfg], capsys)
    assert code == 0
    assert out.strip().startswith("pass") and "bfr.versus_bq" in out


def test_run_degree_zero(tmp_path, capsys):
    code, _, _ = run(["run", "--degree", "0", "--out", str(tmp_path / "z")], capsys)
    assert code == 0
    summary = json.loads((tmp_path / "z" / "summary.json").read_text())
    assert summary["values"]["inner_one"] == "1"
    assert summary["config"]["max_degree"] == 0


def test_star_command(tmp_path, capsys):
    cfg = write_config(tmp_path, n=2, dims=[1], max_degree=2)
    code, out, _ = run(["star", "--config", cfg, "e", "f"], capsys)
    assert code == 0
    assert out.splitlines() == ["C0 = [-1]*z1^2*p1^2", "C1 = [-1]*z1*p1", "C2 = [-1/6]"]
    code, out, _ = run(["star", "--config", cfg, "1", "e*h"], capsys)
    assert out.splitlines()[0] == "C0 = [-2]*z1*p1^2"
    assert all(line.endswith("= 0") for line in out.splitlines()[1:])
    code, out, _ = run(["star", "--config", cfg, "h", "h"], capsys)
    assert out.splitlines()[1] == "C1 = 0"


@pytest.mark.parametrize("argv", [
    ["star", "--degree", "2", "e", "f*f"],
    ["star", "--degree", "2", "e", "f +"],
    ["run", "--degree", "-1"],
    ["run", "--jobs", "0"],
    ["frobnicate"],
    ["probe-rpn", "--degree", "1", "--config", "FULL"],
])
def test_usage_errors(tmp_path, capsys, argv):
    argv = [write_config(tmp_path, n=3, dims=[1, 2]) if a == "FULL" else a for a in argv]
    code, _, _ = run(argv, capsys)
    assert code == 2


def test_bad_configs(tmp_path, capsys):
    for data in ({"n": 3, "dims": [2, 1]}, {"n": 1, "dims": [1]}, {"n": 2, "flavour": 1}):
        code, _, err = run(["dims", "--config", write_config(tmp_path, **data)], capsys)
        assert code == 2 and "error" in err
    code, _, _ = run(["dims", "--config", str(tmp_path / "missing.json")], capsys)
    assert code == 2


def test_failing_check_sets_exit_status(monkeypatch, capsys):
    bad = checks.Check("zz.always_fails", "test:failure", lambda ctx: (False, "forced"))
    monkeypatch.setattr(checks, "CHECKS", checks.CHECKS + [bad])
    monkeypatch.setattr("flagstar.cli.CHECKS", checks.CHECKS)
    code, out, _ = run(["run", "--degree", "1"], capsys)
    assert code == 1
    assert "fail     zz.always_fails" in out


def test_other_commands(tmp_path, capsys):
    cfg = write_config(tmp_path, n=2, dims=[1], max_degree=3)
    code, out, _ = run(["lambda", "--config", cfg], capsys)
    assert code == 0 and "E12  0  0  -1/6" in out
    code, out, _ = run(["lambda", "--config", cfg, "--x", "E12", "--degree", "1"], capsys)
    assert code == 0 and out.split() == ["0", "0", "-1/6"]
    code, out, _ = run(["gram", "--config", cfg], capsys)
    assert code == 0 and out.splitlines()[:2] == ["0  1", "1  1/6"]
    code, out, _ = run(["dims", "--config", cfg], capsys)
    assert out.splitlines()[-1] == "3  10  3  7"
    code, out, _ = run(["probe-rpn", "--config", cfg, "--degree", "4"], capsys)
    report = json.loads(out)
    assert code == 0 and report["D"] == 4 and len(report["generators"]) == 3


def test_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("FLAGSTAR_CACHE_DIR", str(tmp_path / "cache"))
    cfg = RunConfig(n=2, dims=(1,), max_degree=2, checks=("trace",))
    first = cmd_run(cfg, stream=open("/dev/null", "w"))
    assert list((tmp_path / "cache").glob("*.pkl"))
    second = cmd_run(cfg, stream=open("/dev/null", "w"))
    fresh = cmd_run(RunConfig(n=2, dims=(1,), max_degree=2, checks=("trace",), cache=False),
                    stream=open("/dev/null", "w"))
    assert first["files"] == second["files"] == fresh["files"]


def test_jobs_do_not_change_bundle(tmp_path, capsys):
    cfg = write_config(tmp_path, n=3, dims=[1], max_degree=2)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--config", cfg, "--out", str(a), "--jobs", "1"]) == 0
    assert main(["run", "--config", cfg, "--out", str(b), "--jobs", "3", "--no-cache"]) == 0
    for f in sorted(p.name for p in a.iterdir()):
        assert (a / f).read_bytes() == (b / f).read_bytes()


def test_config_validation():
    with pytest.raises(UsageError):
        RunConfig.from_json({"n": 2, "dims": [1], "max_degree": "3"})
    assert RunConfig.from_json({"n": 3, "dims": [1, 2]}, max_degree=2).max_degree == 2
