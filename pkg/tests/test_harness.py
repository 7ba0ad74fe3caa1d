import csv
import json
import os

import numpy as np
import pytest

from battleopt import harness
from battleopt.core import CatalogError, ConfigurationError, Individual, RunTrace
from battleopt.problems import get_problem


def small_config(tmp_path, **overrides):
    data = {
        "problems": [{"name": "sphere", "dimension": 3}, "TBTD"],
        "algorithms": ["MBGO", "RANDOM", {"name": "DE", "population_size": 8,
                                          "parameters": {"F": 0.5}}],
        "trials": 3,
        "base_seed": 11,
        "max_evaluations": 240,
        "workers": 1,
        "output_dir": str(tmp_path / "out"),
    }
    data.update(overrides)
    return harness.ExperimentConfig.from_dict(data)


def make_trace(points, problem="p", algorithm="A"):
    return RunTrace(problem, algorithm, 0, list(points),
                    Individual(np.zeros(1), points[-1][1]), points[-1][0], points[-1][0], 2)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_budget_rule():
    assert harness.budget_for(get_problem("sphere", 30)) == 30_000
    assert harness.budget_for(get_problem("rastrigin", 10)) == 10_000
    for name in ("TBTD", "GTD", "PVP"):
        assert harness.budget_for(get_problem(name)) == 20_000


def test_stable_seed_properties():
    s = harness.stable_seed(0, "sphere_D10", "MBGO", 0)
    assert s == harness.stable_seed(0, "sphere_D10", "MBGO", 0)
    assert 0 <= s < 2 ** 63
    others = {harness.stable_seed(0, "sphere_D10", "MBGO", t) for t in range(1, 200)}
    assert s not in others and len(others) == 199
    assert s != harness.stable_seed(1, "sphere_D10", "MBGO", 0)


def test_single_cell_report_cardinality(tmp_path):
    cfg = harness.ExperimentConfig.from_dict({
        "problems": ["CBD"], "algorithms": ["MBGO"], "trials": 1,
        "max_evaluations": 200, "output_dir": str(tmp_path), "workers": 1})
    report = harness.run_experiment(cfg)
    assert list(report.summaries) == ["CBD"]
    assert list(report.summaries["CBD"]) == ["MBGO"]
    assert report.summaries["CBD"]["MBGO"]["std"] == 0.0
    assert report.pairwise == {} and report.tallies == {}
    rows = read_csv(tmp_path / "report.csv")
    assert len(rows) == 2


def test_experiment_outputs(tmp_path):
    cfg = small_config(tmp_path)
    report = harness.run_experiment(cfg)
    root = tmp_path / "out"
    traces = sorted(root.glob("traces/*/*/trial_*.jsonl"))
    assert len(traces) == 2 * 3 * 3
    for path in traces:
        t = harness.read_trace(path)
        assert t.evaluations == 240
        best = [f for _, f in t.checkpoints]
        assert all(a >= b for a, b in zip(best, best[1:]))
    assert set(report.pairwise["sphere_D3"]) == {"RANDOM", "DE"}
    assert sum(report.tallies["DE"].values()) == 2
    for label in ("sphere_D3", "TBTD"):
        rows = read_csv(root / "convergence" / f"{label}.csv")
        assert rows[0] == ["evaluations", "MBGO", "RANDOM", "DE"]
        evals = [int(r[0]) for r in rows[1:]]
        assert evals == sorted(set(evals)) and evals[-1] == 240
    saved = json.loads((root / "config.json").read_text())
    assert "output_dir" not in saved


def test_reruns_byte_identical(tmp_path):
    harness.run_experiment(small_config(tmp_path / "a"))
    harness.run_experiment(small_config(tmp_path / "b"))
    a_files = sorted(p.relative_to(tmp_path / "a" / "out")
                     for p in (tmp_path / "a" / "out").rglob("*") if p.is_file())
    b_files = sorted(p.relative_to(tmp_path / "b" / "out")
                     for p in (tmp_path / "b" / "out").rglob("*") if p.is_file())
    assert a_files == b_files
    for rel in a_files:
        assert (tmp_path / "a" / "out" / rel).read_bytes() == (tmp_path / "b" / "out" / rel).read_bytes()


def test_parallel_matches_serial(tmp_path):
    serial = harness.run_experiment(small_config(tmp_path / "s", trials=2))
    parallel = harness.run_experiment(small_config(tmp_path / "p", trials=2, workers=2))
    assert serial.to_dict() == parallel.to_dict()


def test_stats_recompute_matches_online(tmp_path):
    cfg = small_config(tmp_path)
    online = harness.run_experiment(cfg)
    root = tmp_path / "out"
    before = (root / "report.md").read_bytes()
    (root / "report.md").unlink()
    offline = harness.recompute_report(root)
    assert offline.to_dict() == online.to_dict()
    assert (root / "report.md").read_bytes() == before


def test_report_round_trip_and_markdown(tmp_path):
    samples = {"P": {"MBGO": [1.0, 1.1, 0.9, 1.05, 0.95, 1.02],
                     "X": [5.0, 5.1, 4.9, 5.2, 4.8, 5.05]}}
    report = harness.build_report(samples, ["P"], ["MBGO", "X"], "MBGO")
    assert report.pairwise["P"]["X"].label == "+"
    assert report.tallies == {"X": {"+": 1, "=": 0, "-": 0}}
    again = harness.ComparisonReport.from_dict(json.loads(harness.render_report(report, "json")))
    assert again.to_dict() == report.to_dict()
    md = harness.render_report(report, "markdown")
    best = harness.format_float(np.mean(samples["P"]["MBGO"]))
    assert f"**{best}**" in md
    assert "1/0/0" in md
    with pytest.raises(ConfigurationError):
        harness.render_report(report, "xml")


def test_holm_family_per_problem():
    rng = np.random.default_rng(0)
    ref = list(rng.normal(0, 1, 12))
    samples = {"P": {"R": ref, "A": list(rng.normal(3, 1, 12)), "B": list(rng.normal(0.5, 1, 12))}}
    report = harness.build_report(samples, ["P"], ["R", "A", "B"], "R")
    raw = [report.pairwise["P"][k].p_value for k in ("A", "B")]
    adj = [report.pairwise["P"][k].adjusted_p for k in ("A", "B")]
    from battleopt.stats import holm_adjust
    assert adj == holm_adjust(raw)


def test_convergence_single_and_identical(tmp_path):
    t = make_trace([(1, 9.0), (4, 3.0), (6, 2.0)])
    rows = read_csv(harness.emit_convergence_csv([t], tmp_path / "one.csv"))
    assert rows == [["evaluations", "A"], ["1", "9"], ["4", "3"], ["6", "2"]]
    rows2 = read_csv(harness.emit_convergence_csv([t, t, t], tmp_path / "three.csv"))
    assert rows2 == rows


def test_convergence_step_interpolation(tmp_path):
    a = make_trace([(1, 8.0), (4, 2.0)])
    b = make_trace([(1, 4.0), (2, 1.0), (4, 1.0)])
    rows = read_csv(harness.emit_convergence_csv([a, b], tmp_path / "c.csv"))
    assert rows[1:] == [["1", "6"], ["2", "4.5"], ["4", "1.5"]]


def test_convergence_large_stride_two_rows(tmp_path):
    trace = harness.solve(get_problem("sphere", 2), "MBGO", 50, 1, population_size=5,
                          trace_stride=1000)
    rows = read_csv(harness.emit_convergence_csv([trace], tmp_path / "c.csv"))
    assert [r[0] for r in rows[1:]] == ["1", "50"]


def test_convergence_rejects_mixed_problems(tmp_path):
    with pytest.raises(ConfigurationError):
        harness.emit_convergence_csv([make_trace([(1, 1.0)], "p"), make_trace([(1, 1.0)], "q")],
                                     tmp_path / "x.csv")


def test_trace_round_trip(tmp_path):
    trace = harness.solve(get_problem("PVP"), "PSO", 120, 4, population_size=10)
    harness.write_trace(trace, tmp_path / "t.jsonl", trial=2)
    back = harness.read_trace(tmp_path / "t.jsonl")
    assert back.checkpoints == trace.checkpoints
    assert np.array_equal(back.final_best.position, trace.final_best.position)
    assert back.best_fitness == trace.best_fitness
    header = json.loads((tmp_path / "t.jsonl").read_text().splitlines()[0])
    assert header["trial"] == 2 and header["algorithm"] == "PSO"


@pytest.mark.parametrize("data, error", [
    ({"problems": [], "algorithms": ["MBGO"]}, ConfigurationError),
    ({"problems": ["sphere"], "algorithms": ["GA"]}, CatalogError),
    ({"problems": ["nope"], "algorithms": ["MBGO"]}, CatalogError),
    ({"problems": ["sphere"], "algorithms": ["MBGO"], "colour": 1}, ConfigurationError),
    ({"problems": ["sphere"], "algorithms": ["MBGO", "MBGO"]}, ConfigurationError),
    ({"problems": ["sphere"], "algorithms": ["MBGO"], "reference": "DE"}, ConfigurationError),
    ({"problems": ["sphere"], "algorithms": ["MBGO"], "trials": 0}, ConfigurationError),
])
def test_config_validation(data, error):
    with pytest.raises(error):
        harness.ExperimentConfig.from_dict(data)


def test_unknown_solver_parameters():
    with pytest.raises(ConfigurationError):
        harness.solve(get_problem("sphere", 2), "MBGO", 50, 0, 5, {"beta": 1})


def test_seed_collision_detected(tmp_path, monkeypatch):
    monkeypatch.setattr(harness, "stable_seed", lambda *args: 7)
    with pytest.raises(RuntimeError, match="collision"):
        harness.run_experiment(small_config(tmp_path))


@pytest.mark.skipif(os.geteuid() == 0, reason="root ignores directory permissions")
def test_unwritable_output(tmp_path):
    locked = tmp_path / "locked"
    locked.mkdir()
    locked.chmod(0o500)
    try:
        with pytest.raises(PermissionError):
            harness.run_experiment(small_config(tmp_path, output_dir=str(locked / "out")))
    finally:
        locked.chmod(0o700)


def test_output_path_is_a_file(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError):
        harness.run_experiment(small_config(tmp_path, output_dir=str(blocker)))
