"""Multiplayer battle game optimizer (MBGO).

One generation is a movement phase followed by a battle phase, each
visiting individuals ``0..N-1`` in order with elite replacement and live
best/worst tracking. The per-individual loops run in a compiled kernel when
available (see :mod:`battleopt._backend`).

Random draw order per run, all from one PCG64 stream:

1. initial positions, ``(N, D)`` uniforms;
2. each movement phase: ``alpha (N,)``, angle ``u (N,)``, ``coin (N, D)``,
   ``normal (N, D)``, ``frac (N, D)``;
3. each battle phase: opponent offsets ``(N,)``, angle ``u (N,)``,
   ``coin (N, D)``, ``frac (N, D)``.

Whole blocks are drawn even when a branch does not use them, so the stream
position never depends on the search trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _backend
from .core import (
    ConfigurationError,
    Population,
    RunTrace,
    Tracker,
    make_rng,
    refresh_extremes,
    uniform_init,
)
from .operators import cos_turns, sin_turns

__all__ = ["MbgoConfig", "Mbgo", "optimize", "draw_opponents"]


@dataclass
class MbgoConfig:
    population_size: int = 100
    max_evaluations: int = 10_000
    alpha_low: float = 0.8
    alpha_high: float = 1.2
    eps: float = 1e-12
    seed: int = 0

    def validate(self) -> None:
        if self.population_size < 2:
            raise ConfigurationError(
                f"population_size must be >= 2, got {self.population_size}")
        if self.max_evaluations < self.population_size:
            raise ConfigurationError(
                "max_evaluations must be at least population_size "
                f"({self.max_evaluations} < {self.population_size})")
        if not 0 < self.alpha_low <= self.alpha_high:
            raise ConfigurationError(
                f"need 0 < alpha_low <= alpha_high, got {self.alpha_low}, {self.alpha_high}")
        if not self.eps > 0:
            raise ConfigurationError(f"eps must be positive, got {self.eps}")


def draw_opponents(rng: np.random.Generator, n: int) -> np.ndarray:
    """One uniformly random opponent index per individual, never itself."""
    offsets = rng.integers(0, n - 1, size=n)
    return offsets + (offsets >= np.arange(n))


class Mbgo:
    """Stateful optimizer; :func:`optimize` is the usual entry point.

    Parameters
    ----------
    problem : ProblemSpec
        Anything with ``name``, ``bounds`` and a ``fitness(x)`` method.
    config : MbgoConfig
    trace_stride : int, optional
        Checkpoint spacing in evaluations. Defaults to the population size.
    backend : {"auto", "cython", "python"}, optional
        Kernel implementation. Defaults to the one chosen at import.
    """

    name = "MBGO"

    def __init__(self, problem, config: MbgoConfig,
                 trace_stride: Optional[int] = None, backend: Optional[str] = None):
        config.validate()
        self.problem = problem
        self.config = config
        self.bounds = problem.bounds
        self.kernels = _backend.kernels if backend is None else _backend.get_kernels(backend)
        self.rng = make_rng(config.seed)
        self.tracker = Tracker(problem.fitness, config.max_evaluations,
                               trace_stride or config.population_size)
        self.population: Optional[Population] = None
        self._ext = np.zeros(2, dtype=np.int64)
        self._lower = np.array(self.bounds.lower, dtype=float)
        self._upper = np.array(self.bounds.upper, dtype=float)

    def initialize(self) -> Population:
        n = self.config.population_size
        pop = uniform_init(self.bounds, n, self.rng)
        pop.positions = np.ascontiguousarray(pop.positions)
        pop.fitness = self.tracker.evaluate_many(pop.positions)
        refresh_extremes(pop)
        self._ext[:] = (pop.best_index, pop.worst_index)
        self.population = pop
        return pop

    def movement(self) -> int:
        pop, cfg, rng = self.population, self.config, self.rng
        n, d = pop.positions.shape
        alpha = rng.uniform(cfg.alpha_low, cfg.alpha_high, size=n)
        sin_u = sin_turns(rng.random(n))
        coin = rng.random((n, d))
        normal = rng.standard_normal((n, d))
        frac = rng.random((n, d))
        used = self.kernels.movement_phase(
            pop.positions, pop.fitness, self._ext, alpha, sin_u, coin, normal, frac,
            self._lower, self._upper, float(cfg.eps), self.tracker.evaluate,
            self.tracker.remaining)
        self._sync()
        return used

    def battle(self) -> int:
        pop, rng = self.population, self.rng
        n, d = pop.positions.shape
        opponent = draw_opponents(rng, n).astype(np.int64)
        cos_u = cos_turns(rng.random(n))
        coin = rng.random((n, d))
        frac = rng.random((n, d))
        used = self.kernels.battle_phase(
            pop.positions, pop.fitness, self._ext, opponent, cos_u, coin, frac,
            self._lower, self._upper, self.tracker.evaluate, self.tracker.remaining)
        self._sync()
        return used

    def _sync(self) -> None:
        self.population.best_index = int(self._ext[0])
        self.population.worst_index = int(self._ext[1])

    def step(self) -> int:
        """Run one generation (movement then battle); return evaluations used."""
        used = 0
        if not self.tracker.exhausted:
            used += self.movement()
        if not self.tracker.exhausted:
            used += self.battle()
        return used

    def run(self) -> RunTrace:
        if self.population is None:
            self.initialize()
        while not self.tracker.exhausted:
            self.step()
        return self.tracker.finish(self.problem.name, self.name, self.config.seed,
                                   self.config.population_size)


def optimize(problem, config: MbgoConfig, trace_stride: Optional[int] = None,
             backend: Optional[str] = None) -> RunTrace:
    return Mbgo(problem, config, trace_stride=trace_stride, backend=backend).run()
