import json
import os

import pytest

from uavtilt.cli import main

FAST = ["--set", "grid_resolution=60", "--set", "ga.population_size=8",
        "--set", "ga.iterations=2", "--set", "single_step=15"]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_twice_identical(tmp_path, capsys):
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    assert run(["run", *FAST, "--seed", "3", "--out", str(a)], capsys)[0] == 0
    assert run(["run", *FAST, "--seed", "3", "--out", str(b)], capsys)[0] == 0
    assert run(["run", *FAST, "--seed", "3", "--threads", "1", "--out", str(c)], capsys)[0] == 0
    for name in ("summary.json", "uav_report.csv", "gue_report.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes() == (c / name).read_bytes()
    assert (a / "optimizer_trace.jsonl").read_text() == (b / "optimizer_trace.jsonl").read_text()


def test_threads_do_not_change_results(tmp_path, capsys):
    outs = []
    for t in ("1", "3"):
        d = tmp_path / t
        assert run(["run", *FAST, "--threads", t, "--out", str(d)], capsys)[0] == 0
        outs.append([(d / n).read_bytes() for n in sorted(os.listdir(d))])
    assert outs[0] == outs[1]


def test_outputs_stay_in_out_dir(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = run(["run", *FAST, "--out", "res"], capsys)
    assert code == 0
    assert os.listdir(tmp_path) == ["res"]
    for line in out.split():
        assert line.startswith("res")


def test_default_out_dir(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(["run", *FAST, "--set", "name=demo", "--set", "scheme=no_ut"], capsys)[0] == 0
    assert (tmp_path / "runs" / "demo" / "summary.json").exists()


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[scenario]\nscheme = hra_single\nisd = 1000\ngrid_resolution = 80\n")
    code, _, _ = run(["run", "--config", str(cfg), "--set", "isd=700", "--out", str(tmp_path / "o")], capsys)
    assert code == 0
    s = json.loads((tmp_path / "o" / "summary.json").read_text())
    assert s["scenario"]["isd"] == 700.0 and s["scenario"]["scheme"] == "hra_single"


def test_pattern_rows(tmp_path, capsys):
    p = tmp_path / "p.csv"
    assert run(["pattern", "--out", str(p)], capsys)[0] == 0
    assert len(p.read_text().splitlines()) == 1802


def test_curves(tmp_path, capsys):
    p = tmp_path / "c.csv"
    assert run(["curves", "--d-min", "10", "--d-max", "100", "--step", "10", "--out", str(p)], capsys)[0] == 0
    lines = p.read_text().splitlines()
    assert len(lines) == 11 and lines[0].startswith("d2d_m,")


def test_sweep(tmp_path, capsys):
    code, _, _ = run(["sweep", *FAST, "--set", "scheme=random", "--axis", "isd",
                      "--values", "1000,500,700", "--out", str(tmp_path)], capsys)
    assert code == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert len(lines) == 4
    assert [ln.split(",")[0] for ln in lines[1:]] == ["500", "700", "1000"]


def test_optimize(tmp_path, capsys):
    code, out, _ = run(["optimize", *FAST, "--out", str(tmp_path)], capsys)
    assert code == 0
    d = json.loads(out.splitlines()[0])
    assert len(d["best_tilts"]) == 19
    assert (tmp_path / "optimizer_trace.jsonl").exists()


@pytest.mark.parametrize("argv", [["bogus"], [], ["run", "--set", "isd"], ["run", "--set", "isd=5km"],
                                  ["run", "--config", "/nonexistent.ini"],
                                  ["sweep", "--axis", "nope", "--values", "1"]])
def test_usage_errors_exit_1(argv, capsys, tmp_path):
    code, _, err = run(argv + (["--out", str(tmp_path)] if argv[:1] in (["run"], ["sweep"]) else []), capsys)
    assert code == 1
    assert err


def test_runtime_error_exit_2(tmp_path, capsys):
    # the output path runs through a regular file, so writing fails at run time
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, err = run(["pattern", "--out", str(blocker / "p.csv")], capsys)
    assert code == 2 and "error" in err
