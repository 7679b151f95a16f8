import json

import numpy as np
import pytest

from sominit.cli import main
from sominit.datasets import load_csv
from sominit.som import Chain


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def spiral(tmp_path):
    path = tmp_path / "spiral.csv"
    assert run("generate", "--shape", "spiral3", "--n", 300, "--seed", 42, "-o", path) == 0
    return path


def test_generate(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert run("generate", "--shape", "spiral3", "--n", 1000, "--noise", 0, "--seed", 42, "-o", out) == 0
    assert len(out.read_text().splitlines()) == 1000
    assert "1000 points" in capsys.readouterr().out


def test_generate_twice_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        run("generate", "--shape", "tree", "--noise", 0.05, "--seed", 3, "-o", path)
    assert a.read_bytes() == b.read_bytes()


def test_generate_param(tmp_path):
    out = tmp_path / "arc.csv"
    assert run("generate", "--shape", "horseshoe", "--param", "arm_length=0", "-o", out) == 0
    pts = load_csv(out).points
    np.testing.assert_allclose(np.hypot(pts[:, 0], pts[:, 1]), 1.0, atol=1e-12)


def test_usage_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        run("generate", "--shape", "unknown", "-o", tmp_path / "x.csv")
    assert exc.value.code == 2
    assert run("generate", "--shape", "tree", "--param", "bogus=1", "-o", tmp_path / "x.csv") == 2
    assert run("generate", "--shape", "tree", "--n", -5, "-o", tmp_path / "x.csv") == 2
    assert run("experiment", "--k", "10") == 2


def test_runtime_failure(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3,x\n")
    assert run("train", "--data", bad, "--k", 3, "-o", tmp_path / "c.json") == 1
    assert "line 2" in capsys.readouterr().err


def test_train_and_fvu(spiral, tmp_path, capsys):
    chain_path = tmp_path / "chain.json"
    hist_path = tmp_path / "hist.json"
    assert run("train", "--data", spiral, "--k", 10, "--init", "ri", "--seed", 5,
               "-o", chain_path, "--history", hist_path) == 0
    printed = capsys.readouterr().out
    assert printed.startswith("steps=")
    chain = Chain.from_json(chain_path.read_text())
    assert chain.k == 10
    assert json.loads(hist_path.read_text())[-1]["nodes"] == chain.nodes.tolist()
    assert run("fvu", "--data", spiral, "--chain", chain_path) == 0
    rep = json.loads(capsys.readouterr().out)
    assert printed.strip().endswith(f"fvu={100 * rep['fvu']:.2f}%")
    assert run("fvu", "--data", spiral, "--pca") == 0
    assert 0 < json.loads(capsys.readouterr().out)["fvu"] <= 1


def _experiment(out, *extra):
    return run("experiment", "--shape", "s_shape", "--n", 200, "--k", "5,8", "--trials", 6, "--out", out, *extra)


def test_experiment_outputs_and_determinism(tmp_path, capsys):
    out = tmp_path / "run"
    assert _experiment(out) == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == [
        "s_shape_k5.json", "s_shape_k5_hist.csv", "s_shape_k5_hist.svg",
        "s_shape_k8.json", "s_shape_k8_hist.csv", "s_shape_k8_hist.svg",
        "s_shape_summary.csv",
    ]
    first = {p.name: p.read_bytes() for p in out.iterdir()}
    assert _experiment(out) == 0
    assert {p.name: p.read_bytes() for p in out.iterdir()} == first


def test_experiment_single_trial_histogram(tmp_path):
    out = tmp_path / "one"
    assert run("experiment", "--shape", "c_shape", "--n", 100, "--k", "6", "--trials", 1, "--out", out) == 0
    rep = json.loads((out / "c_shape_k6.json").read_text())
    assert np.count_nonzero(rep["histogram"]["counts"]) == 1


def test_experiment_from_config(tmp_path):
    conf = tmp_path / "e.conf"
    conf.write_text(f"shape = tree\nn = 150\nks = 4\ntrials = 3\nout_dir = {tmp_path / 'cfg'}\n")
    assert run("experiment", "--config", conf) == 0
    rep = json.loads((tmp_path / "cfg" / "tree_k4.json").read_text())
    assert rep["config"]["trials"] == 3 and rep["dataset"]["n"] == 150


def test_report_command(tmp_path, capsys):
    out = tmp_path / "run"
    _experiment(out)
    capsys.readouterr()
    assert run("report", out, "--format", "csv") == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3 and lines[1].startswith("s_shape,5,6,")
    assert run("report", tmp_path / "nothing.json") == 1
