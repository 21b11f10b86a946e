import csv
import json
import os

from ppsonet.cli import main


def test_train(toy_csv, tmp_path, capsys):
    out = tmp_path / "run"
    code = main(["train", "--dataset", toy_csv, "--pop", "6", "--iters", "10", "--seeds", "1-3",
                 "--out", str(out)])
    assert code == 0
    assert sorted(os.listdir(out)) == ["confusion_best.csv", "convergence_seed1.csv",
                                       "convergence_seed2.csv", "convergence_seed3.csv",
                                       "metrics.json", "summary.txt"]
    assert "best seed" in capsys.readouterr().out
    # existing outputs without --force is a configuration error
    assert main(["train", "--dataset", toy_csv, "--pop", "6", "--iters", "10", "--seeds", "1",
                 "--out", str(out)]) == 2


def test_train_with_config_and_set(toy_csv, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"dataset = {toy_csv}\nalgorithm = SGPSO\npop = 5\niters = 5\nseeds = 4\n")
    out = tmp_path / "run"
    assert main(["train", "--config", str(cfg), "--set", "c3=0.25", "--out", str(out)]) == 0
    meta = json.loads((out / "metrics.json").read_text())
    assert meta["config"]["c3"] == 0.25 and meta["config"]["algorithm"] == "SGPSO"


def test_compare(toy_csv, tmp_path):
    out = tmp_path / "cmp"
    assert main(["compare", "--dataset", toy_csv, "--algorithms", "PPSO,GSA", "--pop", "5",
                 "--iters", "5", "--seeds", "1", "--out", str(out)]) == 0
    rows = list(csv.DictReader(open(out / "comparison.csv")))
    assert [r["algorithm"] for r in rows] == ["PPSO", "GSA"]
    assert os.path.isdir(out / "PPSO") and os.path.isdir(out / "GSA")


def test_stability(tmp_path, capsys):
    out = tmp_path / "stab"
    assert main(["stability", "--omega", "0.7", "--psi", "1.5", "--start", "1,1", "--start", "0,2",
                 "--grid", "20", "--out", str(out)]) == 0
    assert sorted(os.listdir(out)) == ["stability_region.csv", "trajectory_01.csv", "trajectory_02.csv"]
    assert len(open(out / "stability_region.csv").read().splitlines()) == 401
    assert "sr_stable=True" in capsys.readouterr().out
    assert main(["stability", "--out", str(out)]) == 2
    assert main(["stability", "--out", str(out), "--force", "--start", "nope"]) == 2


def test_exit_codes(tmp_path, toy_csv):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2,A\n3,,B\n")
    assert main(["train", "--dataset", str(bad), "--out", str(tmp_path / "a")]) == 3
    assert main(["train", "--dataset", str(tmp_path / "missing.csv"), "--out", str(tmp_path / "b")]) == 3
    assert main(["train", "--dataset", toy_csv, "--set", "nope=1", "--out", str(tmp_path / "c")]) == 2
    assert main(["train", "--out", str(tmp_path / "d")]) == 2
    assert main(["train", "--dataset", toy_csv, "--pop", "2", "--iters", "1", "--seeds", "1",
                 "--set", "ub=inf", "--out", str(tmp_path / "e")]) == 2


def test_numeric_failure_exit_code(toy_csv, tmp_path, monkeypatch):
    from ppsonet import runner
    from ppsonet.errors import NumericError

    def boom(config):
        raise NumericError("objective returned NaN")

    monkeypatch.setattr(runner, "run_experiment", boom)
    assert main(["train", "--dataset", toy_csv, "--out", str(tmp_path / "n")]) == 4
