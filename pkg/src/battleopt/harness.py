"""Experiment orchestration: seeded batches, trace files and comparison reports.

Output directory layout written by :func:`run_experiment`::

    <out>/config.json                      normalized experiment config
    <out>/traces/<problem>/<algorithm>/trial_NNN.jsonl
    <out>/convergence/<problem>.csv        mean best-so-far per algorithm
    <out>/report.json, report.csv, report.md

A trace file holds one JSON object per line: a header with the run metadata
and final best individual, then one ``{"evaluations", "best_fitness"}``
object per checkpoint.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional

import numpy as np

from . import baselines, stats
from .core import CatalogError, ConfigurationError, Individual, RunTrace
from .mbgo import MbgoConfig
from .mbgo import optimize as mbgo_optimize
from .problems import ProblemSpec, canonical_name, get_problem

__all__ = [
    "ALGORITHMS",
    "ExperimentConfig",
    "ProblemEntry",
    "AlgorithmEntry",
    "ComparisonReport",
    "budget_for",
    "stable_seed",
    "solve",
    "run_experiment",
    "collect_traces",
    "build_report",
    "recompute_report",
    "write_trace",
    "read_trace",
    "emit_convergence_csv",
    "emit_report_table",
    "format_float",
]

log = logging.getLogger(__name__)

BENCHMARK_BUDGET_PER_DIM = 1000
ENGINEERING_BUDGET = 20_000


def format_float(x: float) -> str:
    return format(float(x), ".17g")


# algorithm registry -------------------------------------------------------------------

def _run_mbgo(problem, population_size, max_evaluations, seed, params, trace_stride):
    cfg = MbgoConfig(population_size=population_size, max_evaluations=max_evaluations,
                     seed=seed, **params)
    return mbgo_optimize(problem, cfg, trace_stride=trace_stride)


def _baseline(fn, name):
    def run(problem, population_size, max_evaluations, seed, params, trace_stride):
        cfg = baselines.BaselineConfig(name, population_size, max_evaluations, seed, dict(params))
        return fn(problem, cfg, trace_stride=trace_stride)
    return run


ALGORITHMS: dict[str, Callable[..., RunTrace]] = {
    "MBGO": _run_mbgo,
    "DE": _baseline(baselines.de_optimize, "DE"),
    "PSO": _baseline(baselines.pso_optimize, "PSO"),
    "WOA": _baseline(baselines.woa_optimize, "WOA"),
    "RANDOM": _baseline(baselines.random_search, "RANDOM"),
}
_MBGO_PARAMS = {"alpha_low", "alpha_high", "eps"}


def solve(problem: ProblemSpec, algorithm: str, max_evaluations: int, seed: int,
          population_size: int = 100, parameters: Optional[dict] = None,
          trace_stride: Optional[int] = None) -> RunTrace:
    """Run one algorithm once on one problem."""
    key = algorithm.upper()
    if key not in ALGORITHMS:
        raise CatalogError(f"unknown algorithm {algorithm!r}; known: {', '.join(ALGORITHMS)}")
    params = dict(parameters or {})
    if key == "MBGO" and set(params) - _MBGO_PARAMS:
        raise ConfigurationError(
            f"unknown MBGO parameters: {', '.join(sorted(set(params) - _MBGO_PARAMS))}")
    return ALGORITHMS[key](problem, int(population_size), int(max_evaluations), int(seed),
                           params, trace_stride)


def budget_for(problem: ProblemSpec) -> int:
    if problem.is_engineering:
        return ENGINEERING_BUDGET
    return BENCHMARK_BUDGET_PER_DIM * problem.dimension


def stable_seed(base_seed: int, problem: str, algorithm: str, trial: int) -> int:
    """63-bit seed from a BLAKE2b digest of the run identity.

    Seeds of one algorithm do not depend on which other algorithms are in
    the batch.
    """
    key = f"{int(base_seed)}|{problem}|{algorithm}|{int(trial)}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big") >> 1


# configuration ------------------------------------------------------------------------

@dataclass(frozen=True)
class ProblemEntry:
    name: str
    dimension: Optional[int] = None

    def spec(self) -> ProblemSpec:
        return get_problem(self.name, self.dimension)

    @property
    def label(self) -> str:
        spec = self.spec()
        return spec.name if spec.is_engineering else f"{spec.name}_D{spec.dimension}"


@dataclass(frozen=True)
class AlgorithmEntry:
    name: str
    population_size: int = 100
    parameters: tuple = ()
    label: str = ""

    @property
    def key(self) -> str:
        return self.label or self.name


@dataclass
class ExperimentConfig:
    problems: list[ProblemEntry]
    algorithms: list[AlgorithmEntry]
    trials: int = 30
    base_seed: int = 0
    output_dir: str = "battleopt-out"
    trace_stride: Optional[int] = None
    max_evaluations: Optional[int] = None
    reference: Optional[str] = None
    alpha: float = 0.05
    workers: Optional[int] = None

    def __post_init__(self):
        if not self.problems:
            raise ConfigurationError("config lists no problems")
        if not self.algorithms:
            raise ConfigurationError("config lists no algorithms")
        if self.trials < 1:
            raise ConfigurationError(f"trials must be >= 1, got {self.trials}")
        for p in self.problems:
            p.spec()
        keys = [a.key for a in self.algorithms]
        if len(set(keys)) != len(keys):
            raise ConfigurationError("algorithm labels must be unique")
        for a in self.algorithms:
            if a.name.upper() not in ALGORITHMS:
                raise CatalogError(f"unknown algorithm {a.name!r}")
        if self.reference is None:
            self.reference = "MBGO" if "MBGO" in keys else keys[0]
        if self.reference not in keys:
            raise ConfigurationError(f"reference {self.reference!r} is not among the algorithms")

    @property
    def reference_key(self) -> str:
        return self.reference

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigurationError("config must be a JSON object")
        known = {"problems", "algorithms", "trials", "base_seed", "output_dir",
                 "trace_stride", "max_evaluations", "reference", "alpha", "workers"}
        extra = set(data) - known
        if extra:
            raise ConfigurationError(f"unknown config keys: {', '.join(sorted(extra))}")
        problems = []
        for p in data.get("problems", []):
            if isinstance(p, str):
                problems.append(ProblemEntry(p))
            else:
                problems.append(ProblemEntry(p["name"], p.get("dimension")))
        algorithms = []
        for a in data.get("algorithms", []):
            if isinstance(a, str):
                a = {"name": a}
            algorithms.append(AlgorithmEntry(
                name=a["name"].upper(),
                population_size=int(a.get("population_size", 100)),
                parameters=tuple(sorted(a.get("parameters", {}).items())),
                label=a.get("label", ""),
            ))
        kwargs = {k: data[k] for k in known - {"problems", "algorithms"} if k in data}
        return cls(problems=problems, algorithms=algorithms, **kwargs)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return {
            "problems": [{"name": p.name, "dimension": p.dimension} for p in self.problems],
            "algorithms": [
                {"name": a.name, "population_size": a.population_size,
                 "parameters": dict(a.parameters), "label": a.label}
                for a in self.algorithms
            ],
            "trials": self.trials,
            "base_seed": self.base_seed,
            "output_dir": str(self.output_dir),
            "trace_stride": self.trace_stride,
            "max_evaluations": self.max_evaluations,
            "reference": self.reference,
            "alpha": self.alpha,
        }


# trace persistence --------------------------------------------------------------------

def _trace_path(root: Path, problem: str, algorithm: str, trial: int) -> Path:
    return root / "traces" / problem / algorithm / f"trial_{trial:03d}.jsonl"


def write_trace(trace: RunTrace, path, trial: int = 0) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {
        "problem": trace.problem,
        "algorithm": trace.algorithm,
        "seed": trace.seed,
        "trial": trial,
        "evaluations": trace.evaluations,
        "max_evaluations": trace.max_evaluations,
        "population_size": trace.population_size,
        "final_best": {"position": np.asarray(trace.final_best.position).tolist(),
                       "fitness": float(trace.final_best.fitness)},
    }
    lines = [json.dumps(header)]
    lines += [json.dumps({"evaluations": int(e), "best_fitness": float(f)})
              for e, f in trace.checkpoints]
    path.write_text("\n".join(lines) + "\n")


def read_trace(path) -> RunTrace:
    with open(path) as fh:
        rows = [json.loads(line) for line in fh if line.strip()]
    header, points = rows[0], rows[1:]
    best = header["final_best"]
    return RunTrace(
        problem=header["problem"],
        algorithm=header["algorithm"],
        seed=header["seed"],
        checkpoints=[(p["evaluations"], p["best_fitness"]) for p in points],
        final_best=Individual(np.array(best["position"], dtype=float), best["fitness"]),
        evaluations=header["evaluations"],
        max_evaluations=header["max_evaluations"],
        population_size=header["population_size"],
    )


# report ----------------------------------------------------------------------------------

@dataclass
class ComparisonReport:
    problems: list[str]
    algorithms: list[str]
    reference: str
    alpha: float
    summaries: dict = field(default_factory=dict)   # problem -> alg -> {mean, std, n}
    pairwise: dict = field(default_factory=dict)    # problem -> other -> PairwiseResult
    tallies: dict = field(default_factory=dict)     # other -> {"+": n, "=": n, "-": n}

    def to_dict(self) -> dict:
        return {
            "problems": self.problems,
            "algorithms": self.algorithms,
            "reference": self.reference,
            "alpha": self.alpha,
            "summaries": self.summaries,
            "pairwise": {
                p: {o: {"u_statistic": r.u_statistic, "p_value": r.p_value,
                        "adjusted_p": r.adjusted_p, "label": r.label}
                    for o, r in row.items()}
                for p, row in self.pairwise.items()
            },
            "tallies": self.tallies,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ComparisonReport":
        return cls(
            problems=list(data["problems"]),
            algorithms=list(data["algorithms"]),
            reference=data["reference"],
            alpha=data["alpha"],
            summaries=data["summaries"],
            pairwise={p: {o: stats.PairwiseResult(**r) for o, r in row.items()}
                      for p, row in data["pairwise"].items()},
            tallies=data["tallies"],
        )


def build_report(samples: dict, problems: list[str], algorithms: list[str],
                 reference: str, alpha: float = 0.05) -> ComparisonReport:
    """Aggregate final best fitnesses into a report.

    ``samples[problem][algorithm]`` is the list of per-trial final bests.
    Holm's correction runs over the reference-vs-other comparisons of each
    problem.
    """
    report = ComparisonReport(list(problems), list(algorithms), reference, alpha)
    others = [a for a in algorithms if a != reference]
    report.tallies = {o: {stats.PLUS: 0, stats.EQUAL: 0, stats.MINUS: 0} for o in others}
    for prob in problems:
        row = {}
        for alg in algorithms:
            values = samples[prob][alg]
            mean, std = stats.summarize(values)
            row[alg] = {"mean": mean, "std": std, "n": len(values)}
        report.summaries[prob] = row
        if not others:
            continue
        raw = [stats.mann_whitney_u(samples[prob][reference], samples[prob][o])[1]
               for o in others]
        adjusted = stats.holm_adjust(raw)
        report.pairwise[prob] = {}
        for o, adj in zip(others, adjusted):
            res = stats.label_pair(samples[prob][reference], samples[prob][o], alpha, adj)
            report.pairwise[prob][o] = res
            report.tallies[o][res.label] += 1
    return report


def _markdown_table(report: ComparisonReport) -> str:
    head = ["Problem"]
    for a in report.algorithms:
        head += [f"{a} mean", f"{a} std"]
        if a != report.reference and report.pairwise:
            head.append(f"{a} vs {report.reference}")
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for prob in report.problems:
        means = {a: report.summaries[prob][a]["mean"] for a in report.algorithms}
        best = min(means.values())
        cells = [prob]
        for a in report.algorithms:
            m = format_float(means[a])
            cells.append(f"**{m}**" if means[a] == best else m)
            cells.append(format_float(report.summaries[prob][a]["std"]))
            if a != report.reference and report.pairwise:
                cells.append(report.pairwise[prob][a].label)
        lines.append("| " + " | ".join(cells) + " |")
    if report.tallies:
        cells = ["+/=/-"]
        for a in report.algorithms:
            cells += ["", ""]
            if a in report.tallies:
                t = report.tallies[a]
                cells.append(f"{t[stats.PLUS]}/{t[stats.EQUAL]}/{t[stats.MINUS]}")
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def _csv_table(report: ComparisonReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    head = ["problem"]
    for a in report.algorithms:
        head += [f"{a}_mean", f"{a}_std"]
        if a != report.reference and report.pairwise:
            head += [f"{a}_p", f"{a}_adjusted_p", f"{a}_label"]
    writer.writerow(head)
    for prob in report.problems:
        row = [prob]
        for a in report.algorithms:
            s = report.summaries[prob][a]
            row += [format_float(s["mean"]), format_float(s["std"])]
            if a != report.reference and report.pairwise:
                r = report.pairwise[prob][a]
                row += [format_float(r.p_value), format_float(r.adjusted_p), r.label]
        writer.writerow(row)
    return buf.getvalue()


def render_report(report: ComparisonReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2) + "\n"
    if fmt == "csv":
        return _csv_table(report)
    if fmt == "markdown":
        return _markdown_table(report)
    raise ConfigurationError(f"unknown report format {fmt!r}")


def emit_report_table(report: ComparisonReport, fmt: str, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_report(report, fmt))
    return path


def emit_convergence_csv(traces: Iterable[RunTrace], path, labels: Optional[list[str]] = None) -> Path:
    """Write mean best-so-far per algorithm on the union of checkpoint counts.

    Between checkpoints a trace holds its last recorded value.
    """
    traces = list(traces)
    if not traces:
        raise ConfigurationError("no traces to write")
    if len({t.problem for t in traces}) != 1:
        raise ConfigurationError("convergence CSV needs traces of a single problem")
    by_alg: dict[str, list[RunTrace]] = {}
    for t in traces:
        by_alg.setdefault(t.algorithm, []).append(t)
    algs = labels or list(by_alg)
    grid = sorted({e for t in traces for e, _ in t.checkpoints})
    columns = []
    for a in algs:
        curves = []
        for t in by_alg[a]:
            evals = np.array([e for e, _ in t.checkpoints])
            vals = np.array([f for _, f in t.checkpoints])
            idx = np.searchsorted(evals, grid, side="right") - 1
            curves.append(np.where(idx >= 0, vals[np.maximum(idx, 0)], np.nan))
        columns.append(np.mean(curves, axis=0))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["evaluations"] + algs)
        for r, e in enumerate(grid):
            writer.writerow([e] + [format_float(col[r]) for col in columns])
    return path


# execution --------------------------------------------------------------------------------

def _task_list(cfg: ExperimentConfig) -> list[tuple]:
    tasks, seen = [], {}
    for p in cfg.problems:
        spec = p.spec()
        budget = cfg.max_evaluations or budget_for(spec)
        for a in cfg.algorithms:
            for r in range(cfg.trials):
                seed = stable_seed(cfg.base_seed, p.label, a.key, r)
                if seed in seen:
                    raise RuntimeError(f"seed collision between {seen[seed]} and {(p.label, a.key, r)}")
                seen[seed] = (p.label, a.key, r)
                tasks.append((p.name, p.dimension, p.label, a.name, a.key,
                              a.population_size, dict(a.parameters), budget, seed, r,
                              cfg.trace_stride))
    return tasks


def _execute(task) -> tuple:
    (name, dim, label, alg, key, pop, params, budget, seed, trial, stride) = task
    trace = solve(get_problem(name, dim), alg, budget, seed, pop, params, stride)
    trace.problem, trace.algorithm = label, key
    return label, key, trial, trace


def _map(tasks, workers: Optional[int]):
    workers = workers or os.cpu_count() or 1
    if workers <= 1 or len(tasks) <= 1:
        return [_execute(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_execute, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def _write_outputs(cfg: ExperimentConfig, root: Path, traces: dict) -> ComparisonReport:
    problems = [p.label for p in cfg.problems]
    algorithms = [a.key for a in cfg.algorithms]
    samples = {p: {a: [traces[p, a, r].best_fitness for r in range(cfg.trials)]
                   for a in algorithms} for p in problems}
    report = build_report(samples, problems, algorithms, cfg.reference_key, cfg.alpha)
    for p in problems:
        emit_convergence_csv([traces[p, a, r] for a in algorithms for r in range(cfg.trials)],
                             root / "convergence" / f"{p}.csv", labels=algorithms)
    for fmt, ext in (("json", "json"), ("csv", "csv"), ("markdown", "md")):
        emit_report_table(report, fmt, root / f"report.{ext}")
    return report


def run_experiment(cfg: ExperimentConfig) -> ComparisonReport:
    """Run every (problem, algorithm, trial), persist traces and reports."""
    root = Path(cfg.output_dir)
    root.mkdir(parents=True, exist_ok=True)
    if not os.access(root, os.W_OK):
        raise PermissionError(f"output directory {root} is not writable")
    tasks = _task_list(cfg)
    log.info("running %d trials with %s workers", len(tasks), cfg.workers or os.cpu_count())
    results = _map(tasks, cfg.workers)
    traces = {}
    # single writer: all files are produced here after the pool has joined
    saved = {k: v for k, v in cfg.to_dict().items() if k != "output_dir"}
    (root / "config.json").write_text(json.dumps(saved, indent=2) + "\n")
    for label, key, trial, trace in results:
        traces[label, key, trial] = trace
        write_trace(trace, _trace_path(root, label, key, trial), trial)
    return _write_outputs(cfg, root, traces)


def collect_traces(root, cfg: ExperimentConfig) -> dict:
    root = Path(root)
    traces = {}
    for p in cfg.problems:
        for a in cfg.algorithms:
            for r in range(cfg.trials):
                traces[p.label, a.key, r] = read_trace(_trace_path(root, p.label, a.key, r))
    return traces


def recompute_report(root) -> ComparisonReport:
    """Rebuild reports and curves from the traces stored under ``root``."""
    root = Path(root)
    cfg = ExperimentConfig.from_json(root / "config.json")
    cfg.output_dir = str(root)
    return _write_outputs(cfg, root, collect_traces(root, cfg))


def problem_label(name: str, dimension: Optional[int] = None) -> str:
    return ProblemEntry(canonical_name(name), dimension).label
