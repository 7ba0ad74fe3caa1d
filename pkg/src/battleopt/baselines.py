"""Reference optimizers: DE/rand/1/bin, global-best PSO, WOA and random search.

All of them evaluate through :class:`~battleopt.core.Tracker`, so budget
accounting and traces match MBGO evaluation for evaluation. Generations are
synchronous: every offspring of a generation is built from the state at the
start of that generation, then evaluated in index order until the budget
runs out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (
    ConfigurationError,
    RunTrace,
    Tracker,
    clamp_to_bounds,
    make_rng,
    uniform_init,
)

__all__ = [
    "BaselineConfig",
    "DEFAULT_PARAMETERS",
    "de_optimize",
    "pso_optimize",
    "woa_optimize",
    "random_search",
    "de_mutant",
    "binomial_crossover",
    "pso_inertia",
    "pso_velocity",
    "woa_a",
    "woa_update",
]

DEFAULT_PARAMETERS = {
    "DE": {"F": 0.8, "CR": 0.9},
    "PSO": {"w_start": 0.9, "w_end": 0.4, "c1": 2.05, "c2": 2.05, "vmax_fraction": 0.2},
    "WOA": {"a_start": 2.0, "a_end": 0.0, "b": 1.0},
    "RANDOM": {},
}


@dataclass
class BaselineConfig:
    algorithm: str
    population_size: int = 100
    max_evaluations: int = 10_000
    seed: int = 0
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        self.algorithm = self.algorithm.upper()
        if self.algorithm not in DEFAULT_PARAMETERS:
            raise ConfigurationError(f"unknown baseline {self.algorithm!r}")
        unknown = set(self.parameters) - set(DEFAULT_PARAMETERS[self.algorithm])
        if unknown:
            raise ConfigurationError(
                f"unknown {self.algorithm} parameters: {', '.join(sorted(unknown))}")
        self.parameters = {**DEFAULT_PARAMETERS[self.algorithm], **self.parameters}

    def validate(self, min_population: int = 2) -> None:
        if self.population_size < min_population:
            raise ConfigurationError(
                f"{self.algorithm} needs population_size >= {min_population}, "
                f"got {self.population_size}")
        if self.max_evaluations < 1:
            raise ConfigurationError(f"max_evaluations must be >= 1, got {self.max_evaluations}")


def _start(problem, cfg: BaselineConfig, trace_stride: Optional[int]):
    rng = make_rng(cfg.seed)
    tracker = Tracker(problem.fitness, cfg.max_evaluations,
                      trace_stride or cfg.population_size)
    pop = uniform_init(problem.bounds, cfg.population_size, rng)
    x = pop.positions
    fit = tracker.evaluate_many(x)
    return rng, tracker, x[: len(fit)], fit


def _finish(tracker: Tracker, problem, cfg: BaselineConfig) -> RunTrace:
    return tracker.finish(problem.name, cfg.algorithm, cfg.seed, cfg.population_size)


# differential evolution -----------------------------------------------------------

def de_mutant(base, a, b, F: float) -> np.ndarray:
    return np.asarray(base, dtype=float) + F * (np.asarray(a, dtype=float) - np.asarray(b, dtype=float))


def binomial_crossover(target, mutant, u, cr: float, j_rand: int) -> np.ndarray:
    """Take mutant coordinates where ``u < cr`` and always at ``j_rand``."""
    take = np.asarray(u) < cr
    take[j_rand] = True
    return np.where(take, mutant, target)


def _donors(rng, n: int, i: int) -> np.ndarray:
    idx = rng.choice(n - 1, size=3, replace=False)
    return idx + (idx >= i)


def de_optimize(problem, cfg: BaselineConfig, trace_stride: Optional[int] = None) -> RunTrace:
    cfg.validate(min_population=4)
    F, cr = cfg.parameters["F"], cfg.parameters["CR"]
    rng, tracker, x, fit = _start(problem, cfg, trace_stride)
    n, d = x.shape
    while not tracker.exhausted:
        trials = np.empty_like(x)
        for i in range(n):
            r1, r2, r3 = _donors(rng, n, i)
            mutant = de_mutant(x[r1], x[r2], x[r3], F)
            j_rand = rng.integers(d)
            trial = binomial_crossover(x[i], mutant, rng.random(d), cr, j_rand)
            trials[i] = clamp_to_bounds(trial, problem.bounds)
        f_trial = tracker.evaluate_many(trials)
        better = f_trial < fit[: len(f_trial)]
        idx = np.flatnonzero(better)
        x[idx] = trials[idx]
        fit[idx] = f_trial[idx]
    return _finish(tracker, problem, cfg)


# particle swarm ------------------------------------------------------------------------

def pso_inertia(used: int, maximum: int, w_start: float = 0.9, w_end: float = 0.4) -> float:
    """Inertia weight interpolated linearly over the evaluation budget."""
    frac = min(max(used / maximum, 0.0), 1.0)
    return w_start + (w_end - w_start) * frac


def pso_velocity(v, x, pbest, gbest, w, c1, c2, r1, r2) -> np.ndarray:
    return w * v + c1 * r1 * (pbest - x) + c2 * r2 * (gbest - x)


def pso_optimize(problem, cfg: BaselineConfig, trace_stride: Optional[int] = None) -> RunTrace:
    cfg.validate()
    p = cfg.parameters
    rng, tracker, x, fit = _start(problem, cfg, trace_stride)
    n, d = x.shape
    vmax = p["vmax_fraction"] * problem.bounds.span
    v = rng.uniform(-1.0, 1.0, size=(n, d)) * vmax
    pbest, pbest_fit = x.copy(), fit.copy()
    g = int(np.argmin(pbest_fit))
    while not tracker.exhausted:
        w = pso_inertia(tracker.used, tracker.budget.maximum, p["w_start"], p["w_end"])
        r1 = rng.random((n, d))
        r2 = rng.random((n, d))
        v = pso_velocity(v, x, pbest, pbest[g], w, p["c1"], p["c2"], r1, r2)
        v = np.clip(v, -vmax, vmax)
        x = clamp_to_bounds(x + v, problem.bounds)
        f = tracker.evaluate_many(x)
        m = len(f)
        improved = np.flatnonzero(f < pbest_fit[:m])
        pbest[improved] = x[improved]
        pbest_fit[improved] = f[improved]
        g = int(np.argmin(pbest_fit))
    return _finish(tracker, problem, cfg)


# whale optimization ------------------------------------------------------------------------

def woa_a(used: int, maximum: int, a_start: float = 2.0, a_end: float = 0.0) -> float:
    frac = min(max(used / maximum, 0.0), 1.0)
    return a_start + (a_end - a_start) * frac


def woa_update(x, leader, x_rand, a, r1, r2, p, l, b=1.0) -> np.ndarray:
    """One whale move: encircle the leader, chase a random whale, or spiral."""
    x = np.asarray(x, dtype=float)
    leader = np.asarray(leader, dtype=float)
    A = 2.0 * a * r1 - a
    C = 2.0 * r2
    if p < 0.5:
        if abs(A) < 1.0:
            return leader - A * np.abs(C * leader - x)
        x_rand = np.asarray(x_rand, dtype=float)
        return x_rand - A * np.abs(C * x_rand - x)
    dist = np.abs(leader - x)
    return dist * np.exp(b * l) * np.cos(2.0 * np.pi * l) + leader


def woa_optimize(problem, cfg: BaselineConfig, trace_stride: Optional[int] = None) -> RunTrace:
    cfg.validate()
    p = cfg.parameters
    rng, tracker, x, fit = _start(problem, cfg, trace_stride)
    n, _ = x.shape
    best = int(np.argmin(fit))
    leader, leader_fit = x[best].copy(), fit[best]
    while not tracker.exhausted:
        frac = tracker.used / tracker.budget.maximum
        a = woa_a(tracker.used, tracker.budget.maximum, p["a_start"], p["a_end"])
        # second coefficient runs from -1 to -2; spiral parameter l is uniform on [a2, 1]
        a2 = -1.0 - frac
        r1, r2, coin, u = rng.random((4, n))
        l = (a2 - 1.0) * u + 1.0
        partners = rng.integers(0, n, size=n)
        new = np.empty_like(x)
        for i in range(n):
            new[i] = woa_update(x[i], leader, x[partners[i]], a, r1[i], r2[i],
                                coin[i], l[i], p["b"])
        x = clamp_to_bounds(new, problem.bounds)
        f = tracker.evaluate_many(x)
        if len(f):
            j = int(np.argmin(f))
            if f[j] < leader_fit:
                leader, leader_fit = x[j].copy(), f[j]
    return _finish(tracker, problem, cfg)


# random search ------------------------------------------------------------------------------

def random_search(problem, cfg: BaselineConfig, trace_stride: Optional[int] = None) -> RunTrace:
    rng = make_rng(cfg.seed)
    tracker = Tracker(problem.fitness, cfg.max_evaluations,
                      trace_stride or cfg.population_size)
    lower, span = problem.bounds.lower, problem.bounds.span
    block = max(cfg.population_size, 1)
    while not tracker.exhausted:
        tracker.evaluate_many(lower + rng.random((block, problem.dimension)) * span)
    return _finish(tracker, problem, cfg)
