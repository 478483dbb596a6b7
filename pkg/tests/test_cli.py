import json

import numpy as np
import pytest

from pcweibull.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(out):
    return [line.split(",") for line in out.strip().splitlines()[1:]]


def test_prior_quantile_and_cdf(capsys):
    code, out, _ = run(capsys, "prior", "quantile", "--theta", "2.5", "--q", "0.5")
    assert code == 0 and float(rows(out)[0][1]) == 1.0
    code, out, _ = run(capsys, "prior", "cdf", "--theta", "2.5", "--alpha", "1.0")
    assert float(rows(out)[0][1]) == 0.5


def test_prior_density_grid_and_tail_spec(capsys):
    code, out, _ = run(capsys, "prior", "density", "--U", "1", "--p", "0.05", "--alpha-grid", "0.5:2:4")
    assert code == 0 and len(rows(out)) == 4


def test_prior_sample_deterministic(capsys):
    args = ("prior", "sample", "--theta", "2.5", "--n", "5", "--seed", "1")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b and len(rows(a)) == 5


@pytest.mark.parametrize("argv", [
    ("prior", "density", "--alpha", "1"),
    ("prior", "density", "--theta", "1", "--U", "1", "--p", "0.1", "--alpha", "1"),
    ("prior", "sample", "--theta", "1"),
    ("prior", "bogus"),
    ("distance", "to-alpha", "--d", "0.5"),
    ("prior", "density", "--theta", "1", "--alpha-grid", "a:b"),
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_distance_commands(capsys):
    _, out, _ = run(capsys, "distance", "to-alpha", "--d", "0.5", "--branch", "upper")
    assert float(rows(out)[0][1]) == pytest.approx(1.53, abs=0.01)
    assert rows(out)[0][1] == "1.527118"
    _, out, _ = run(capsys, "distance", "to-alpha", "--d", "0.8", "--branch", "lower")
    assert float(rows(out)[0][1]) == pytest.approx(0.62, abs=0.01)
    _, out, _ = run(capsys, "distance", "to-distance", "--alpha", "1")
    assert rows(out)[0][1] == "0.000000"


def test_distance_saturation_exit_1(capsys):
    code, _, err = run(capsys, "distance", "to-alpha", "--d", "1e80", "--branch", "lower")
    assert code == 1 and "lower-branch" in err


def test_tables(capsys):
    _, out, _ = run(capsys, "tables", "--a", "1.5", "--convention", "scale", "--d", "0,0.1,0.5,0.8,1.45")
    r = np.array(rows(out), dtype=float)
    np.testing.assert_allclose(r[:, 2], [0.315, 0.319, 0.322, 0.320, 0.309], atol=0.002)
    np.testing.assert_allclose(r[:, 4], [0.315, 0.311, 0.274, 0.220, 0.051], atol=0.002)
    _, out, _ = run(capsys, "tables", "--a", "0.1", "--convention", "scale", "--d", "1.45")
    assert float(rows(out)[0][2]) == pytest.approx(0.002, abs=0.001)
    _, out, _ = run(capsys, "tables", "--a", "1", "--convention", "rate", "--d", "0")
    assert float(rows(out)[0][2]) == pytest.approx(np.exp(-1), rel=1e-5)
    _, out, _ = run(capsys, "tables", "--figure5", "--points", "11")
    assert out.startswith("distance,gamma_lower,gamma_upper,pc_branch") and len(rows(out)) == 11


def test_fit_pipeline(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("PCWEIBULL_OUTDIR", str(tmp_path))
    assert run(capsys, "fit", "--simulate", "--alpha", "1", "--n", "200", "--seed", "3", "--out", "sim.csv")[0] == 0
    sim = tmp_path / "sim.csv"
    code, _, _ = run(capsys, "fit", "--data", str(sim), "--prior", "pc", "--theta", "2.5", "--out", "pc")
    assert code == 0
    doc = json.loads((tmp_path / "pc.json").read_text())
    lo, hi = doc["alpha"]["ci"]
    assert lo <= 1.0 <= hi
    arr = np.loadtxt(tmp_path / "pc_marginal.csv", delimiter=",", skiprows=1)
    # Round trip: re-normalizing the emitted marginal gives unit mass.
    assert np.trapezoid(arr[:, 1], arr[:, 0]) == pytest.approx(1.0, abs=1e-4)

    code, _, _ = run(capsys, "fit", "--data", str(sim), "--engine", "both", "--mcmc-iters", "20000",
                     "--burn-in", "5000", "--out", "both")
    doc = json.loads((tmp_path / "both.json").read_text())
    assert code == 0 and doc["diagnostics"]["engine_alpha_mean_diff"] < 0.02

    code, _, _ = run(capsys, "fit", "--data", str(sim), "--sweep-theta", "0.5,1,1.5,2,2.5,3,3.5,4,4.5,5",
                     "--out", "sw")
    assert code == 0 and len(list(tmp_path.glob("sw_theta*_marginal.csv"))) == 10

    code, _, _ = run(capsys, "fit", "--data", str(sim), "--prior", "gamma", "--a", "0.1", "--out", "g")
    assert code == 0


def test_fit_bad_csv_exit_2(capsys, tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("time,event,x1\n1,1,1\n2,x,1\n")
    code, _, err = run(capsys, "fit", "--data", str(p))
    assert code == 2 and "row 3" in err and "event" in err


def test_fit_capability_exit_1(capsys, tmp_path):
    p = tmp_path / "k3.csv"
    run(capsys, "fit", "--simulate", "--beta", "0,1,1", "--n", "40", "--out", str(p))
    assert run(capsys, "fit", "--data", str(p), "--engine", "grid", "--out", str(tmp_path / "o"))[0] == 1


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"version": 1, "theta": 2.5, "precision": 3}))
    _, out, _ = run(capsys, "--config", str(cfg), "prior", "cdf", "--alpha", "1.53")
    assert rows(out)[0][1] == "0.857"
    # Explicit flags override the file.
    _, out, _ = run(capsys, "--config", str(cfg), "prior", "cdf", "--alpha", "1.53", "--precision", "5")
    assert rows(out)[0][1] == "0.85745"
    cfg.write_text(json.dumps({"version": 99}))
    assert run(capsys, "--config", str(cfg), "prior", "cdf", "--theta", "1", "--alpha", "1")[0] == 2
