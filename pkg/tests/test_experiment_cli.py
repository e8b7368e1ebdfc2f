import numpy as np
import pytest

from pagerank_lab import ParameterError
from pagerank_lab.cli import main
from pagerank_lab.experiment import ExperimentConfig, experiment_sweep, parse_fit_rows


def test_smoke_sweep(tmp_path):
    cfg = ExperimentConfig(a_values=[1], graphs_per_a=1, n_sites=100)
    res = experiment_sweep(cfg, tmp_path)
    rows = parse_fit_rows(res.fit_rows)
    assert len(rows) == 1
    a, _, g, r2, err = rows[0]
    assert err == "" and -5 <= g <= 0 and 0 <= r2 <= 1


def test_sweep_byte_identical_and_lane_independent(tmp_path):
    cfg = ExperimentConfig(a_values=[0.277, 1], graphs_per_a=3, n_sites=400, m=5, base_seed=4)
    experiment_sweep(cfg, tmp_path / "a")
    experiment_sweep(cfg, tmp_path / "b", workers=2)
    for name in ("fits.csv", "summary.csv", "rank_plot.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_sweep_summary_envelope(tmp_path):
    cfg = ExperimentConfig(a_values=[1, 5], graphs_per_a=4, n_sites=500, m=4)
    res = experiment_sweep(cfg, tmp_path)
    for a, mean, lo, hi in res.summary:
        assert lo <= mean <= hi
    assert (tmp_path / "summary.csv").read_text().splitlines()[0] == "a,g_mean,g_min,g_max"


def test_sweep_resume_reuses_parts(tmp_path):
    cfg = ExperimentConfig(a_values=[1, 5], graphs_per_a=2, n_sites=300, m=3)
    experiment_sweep(cfg, tmp_path)
    first = (tmp_path / "fits.csv").read_bytes()
    part = tmp_path / "parts" / "a=5.0.csv"
    stamp = part.stat().st_mtime_ns
    (tmp_path / "parts" / "a=1.0.csv").unlink()
    experiment_sweep(cfg, tmp_path)
    assert part.stat().st_mtime_ns == stamp
    assert (tmp_path / "fits.csv").read_bytes() == first


def test_sweep_refuses_other_config(tmp_path):
    experiment_sweep(ExperimentConfig(a_values=[1], graphs_per_a=1, n_sites=100), tmp_path)
    with pytest.raises(ParameterError):
        experiment_sweep(ExperimentConfig(a_values=[2], graphs_per_a=1, n_sites=100), tmp_path)


def test_sweep_records_failures(tmp_path):
    # 1-site graphs cannot be fitted; the error lands in the CSV instead of aborting
    cfg = ExperimentConfig(a_values=[1], graphs_per_a=2, n_sites=1, m=2, window=(1, 3))
    res = experiment_sweep(cfg, tmp_path)
    assert all(r.split(",")[-1] for r in res.fit_rows)
    assert np.isnan(res.summary[0][1])


def test_config_validation():
    with pytest.raises(ParameterError):
        ExperimentConfig(a_values=[])
    with pytest.raises(ParameterError):
        ExperimentConfig(delta=1.5)


def test_cli_pipeline(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("PAGERANK_LAB_OUT", str(tmp_path))
    assert main(["generate", "--pages", "2000", "--seed", "1"]) == 0
    assert main(["aggregate", str(tmp_path / "pages.bopg"), "--m", "10"]) == 0
    sites = str(tmp_path / "sites.bosg")
    for solver in ("mpi", "dense", "polyak-tremba", "mcmc", "ensemble"):
        assert main(["pagerank", sites, "--solver", solver, "--walkers", "500",
                     "--steps", "2000"]) == 0
        assert (tmp_path / f"rank_{solver}.csv").exists()
    assert main(["fit", str(tmp_path / "rank_mpi.csv"), "--window", "2", "20",
                 "--min-r2", "0"]) == 0
    assert (tmp_path / "rank_plot.csv").exists()


def test_cli_sample_size(capsys):
    assert main(["sample-size", "--eps", "0.05", "--sigma", "0.01"]) == 0
    assert "N=530" in capsys.readouterr().out


def test_cli_learn(tmp_path, monkeypatch):
    monkeypatch.setenv("PAGERANK_LAB_OUT", str(tmp_path))
    assert main(["learn", "--queries", "2", "--n", "15", "--l", "3", "--T", "20"]) == 0
    assert (tmp_path / "trace.csv").exists() and (tmp_path / "query_1.sprl").exists()
    assert main(["learn", "--problem", "quadratic", "--method", "cd", "--dim", "20"]) == 0


def test_cli_mcmc_study(tmp_path, monkeypatch):
    monkeypatch.setenv("PAGERANK_LAB_OUT", str(tmp_path))
    assert main(["mcmc-study", "--trials", "5"]) == 0
    assert len((tmp_path / "mcmc_study.csv").read_text().splitlines()) == 6


def test_cli_sweep_and_failure_exit(tmp_path):
    out = str(tmp_path / "sw")
    assert main(["sweep", "--a-values", "1", "--graphs-per-a", "2", "--n-sites", "300",
                 "--m", "5", "--out", out, "--min-r2", "0", "--max-spread", "10"]) == 0
    # unreachable r2 requirement -> nonzero exit
    assert main(["sweep", "--a-values", "1", "--graphs-per-a", "2", "--n-sites", "300",
                 "--m", "5", "--out", out, "--min-r2", "1.01"]) == 1


def test_cli_bad_input(tmp_path):
    assert main(["aggregate", str(tmp_path / "missing.bopg")]) == 2
    assert main(["generate", "--pages", "10", "--a", "-1", "--out", str(tmp_path / "x")]) == 2
