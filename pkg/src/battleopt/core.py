"""Shared types and machinery for every optimizer in the package.

All algorithms minimize. Positions are float64 numpy vectors; a population
is stored as an ``(N, D)`` array plus an ``(N,)`` fitness array so the
compiled kernels can work on it in place.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

__all__ = [
    "ConfigurationError",
    "CatalogError",
    "Bounds",
    "Individual",
    "Population",
    "EvaluationBudget",
    "BudgetExhausted",
    "Tracker",
    "RunTrace",
    "make_rng",
    "uniform_init",
    "clamp_to_bounds",
    "elite_replace",
    "refresh_extremes",
]


class ConfigurationError(ValueError):
    """Invalid bounds, population size, budget or algorithm parameters."""


class CatalogError(KeyError):
    """Unknown problem or algorithm name."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


@dataclass(frozen=True)
class Bounds:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.ndim != 1 or lower.shape != upper.shape or lower.size < 1:
            raise ConfigurationError(
                "lower and upper must be 1-D vectors of equal length >= 1, "
                f"got shapes {lower.shape} and {upper.shape}"
            )
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ConfigurationError("bounds must be finite")
        if np.any(lower > upper):
            raise ConfigurationError("lower must not exceed upper in any dimension")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def uniform(cls, low: float, high: float, dimension: int) -> "Bounds":
        return cls(np.full(dimension, float(low)), np.full(dimension, float(high)))

    @property
    def dimension(self) -> int:
        return self.lower.size

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


@dataclass
class Individual:
    position: np.ndarray
    fitness: Optional[float] = None

    def copy(self) -> "Individual":
        return Individual(np.array(self.position, dtype=float), self.fitness)


@dataclass
class Population:
    """N positions with cached fitness and the current best/worst indices.

    ``fitness`` is NaN until the population has been evaluated.
    """

    positions: np.ndarray
    fitness: np.ndarray
    best_index: int = 0
    worst_index: int = 0

    @property
    def size(self) -> int:
        return self.positions.shape[0]

    @property
    def dimension(self) -> int:
        return self.positions.shape[1]

    @property
    def members(self) -> list[Individual]:
        return [
            Individual(self.positions[i].copy(), _fitness_or_none(self.fitness[i]))
            for i in range(self.size)
        ]

    @property
    def best(self) -> Individual:
        i = self.best_index
        return Individual(self.positions[i].copy(), float(self.fitness[i]))

    @property
    def worst(self) -> Individual:
        i = self.worst_index
        return Individual(self.positions[i].copy(), float(self.fitness[i]))


def _fitness_or_none(value) -> Optional[float]:
    return None if np.isnan(value) else float(value)


def make_rng(seed: int) -> np.random.Generator:
    """Return the per-run random stream (PCG64, platform independent)."""
    return np.random.Generator(np.random.PCG64(int(seed)))


def uniform_init(bounds: Bounds, n: int, rng: np.random.Generator) -> Population:
    """Sample ``n`` positions uniformly in the box, one draw per coordinate.

    Draws are consumed row by row (member-major). Fitness is left unset.
    """
    if not isinstance(bounds, Bounds):
        bounds = Bounds(*bounds)
    if n < 2:
        raise ConfigurationError(f"population size must be >= 2, got {n}")
    u = rng.random((n, bounds.dimension))
    positions = bounds.lower + u * bounds.span
    return Population(positions, np.full(n, np.nan))


def clamp_to_bounds(position, bounds: Bounds) -> np.ndarray:
    return np.minimum(np.maximum(position, bounds.lower), bounds.upper)


def elite_replace(incumbent: Individual, candidate: Individual) -> Individual:
    """Keep the candidate only on strict improvement; ties keep the incumbent."""
    if incumbent.fitness is None or candidate.fitness is None:
        raise RuntimeError("elite_replace needs evaluated individuals")
    return candidate if candidate.fitness < incumbent.fitness else incumbent


def refresh_extremes(pop: Population) -> Population:
    if np.any(np.isnan(pop.fitness)):
        raise RuntimeError("population has unevaluated members")
    # argmin/argmax return the first occurrence, which is the lowest-index tie rule
    pop.best_index = int(np.argmin(pop.fitness))
    pop.worst_index = int(np.argmax(pop.fitness))
    return pop


class BudgetExhausted(Exception):
    """Raised by :meth:`Tracker.evaluate` once the budget is spent."""


@dataclass
class EvaluationBudget:
    maximum: int
    used: int = 0

    def __post_init__(self):
        if self.maximum < 1:
            raise ConfigurationError(f"evaluation budget must be >= 1, got {self.maximum}")

    @property
    def remaining(self) -> int:
        return max(self.maximum - self.used, 0)

    @property
    def exhausted(self) -> bool:
        return self.used >= self.maximum

    def fraction(self) -> float:
        return self.used / self.maximum


@dataclass
class RunTrace:
    """Best-so-far history of one run.

    ``checkpoints`` holds ``(evaluations_used, best_fitness)`` pairs with
    strictly increasing evaluation counts.
    """

    problem: str
    algorithm: str
    seed: int
    checkpoints: list[tuple[int, float]]
    final_best: Individual
    evaluations: int
    max_evaluations: int
    population_size: int

    @property
    def best_fitness(self) -> float:
        return float(self.final_best.fitness)


class Tracker:
    """Counts objective calls, keeps the best-so-far and records checkpoints.

    Every optimizer evaluates through :meth:`evaluate`, so the budget and
    trace semantics are identical across algorithms. A checkpoint is taken
    at the first evaluation, at every multiple of ``stride`` and at the end
    of the run.
    """

    def __init__(self, fitness: Callable[[np.ndarray], float], max_evaluations: int,
                 stride: int = 1):
        if stride < 1:
            raise ConfigurationError(f"trace stride must be >= 1, got {stride}")
        self.fitness = fitness
        self.budget = EvaluationBudget(int(max_evaluations))
        self.stride = int(stride)
        self.best_fitness = np.inf
        self.best_position: Optional[np.ndarray] = None
        self.checkpoints: list[tuple[int, float]] = []

    @property
    def used(self) -> int:
        return self.budget.used

    @property
    def remaining(self) -> int:
        return self.budget.remaining

    @property
    def exhausted(self) -> bool:
        return self.budget.exhausted

    def evaluate(self, x: np.ndarray) -> float:
        budget = self.budget
        if budget.used >= budget.maximum:
            raise BudgetExhausted
        f = float(self.fitness(x))
        budget.used += 1
        if f < self.best_fitness or self.best_position is None:
            self.best_fitness = f
            self.best_position = np.array(x, dtype=float)
        used = budget.used
        if used == 1 or used % self.stride == 0:
            self.checkpoints.append((used, self.best_fitness))
        return f

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        """Evaluate rows in order until the budget runs out.

        Returns the fitness of the evaluated prefix only.
        """
        n = min(len(xs), self.remaining)
        return np.array([self.evaluate(xs[i]) for i in range(n)], dtype=float)

    def finish(self, problem: str, algorithm: str, seed: int,
               population_size: int) -> RunTrace:
        used = self.budget.used
        if used and (not self.checkpoints or self.checkpoints[-1][0] != used):
            self.checkpoints.append((used, self.best_fitness))
        best = Individual(self.best_position, self.best_fitness)
        return RunTrace(
            problem=problem,
            algorithm=algorithm,
            seed=int(seed),
            checkpoints=list(self.checkpoints),
            final_best=best,
            evaluations=used,
            max_evaluations=self.budget.maximum,
            population_size=int(population_size),
        )

