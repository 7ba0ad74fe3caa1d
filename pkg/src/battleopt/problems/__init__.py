"""Problem catalog: benchmark functions and constrained engineering designs.

Every problem is exposed as a :class:`ProblemSpec`. Optimizers only use its
``name``, ``bounds`` and :meth:`ProblemSpec.fitness`, which rounds discrete
variables and adds the constraint penalty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..core import Bounds, CatalogError, ConfigurationError
from . import benchmarks as _bm
from . import engineering as _eng
from .engineering import EngineeringProblem

__all__ = [
    "PenaltyPolicy",
    "ProblemSpec",
    "get_problem",
    "evaluate_benchmark",
    "evaluate_engineering",
    "penalized_fitness",
    "apply_discrete",
    "catalog_names",
    "benchmark_names",
    "engineering_names",
    "is_engineering",
    "canonical_name",
    "manifest",
    "DEFAULT_BENCHMARK_DIMENSION",
]

DEFAULT_BENCHMARK_DIMENSION = 10
# non-finite or runaway values are replaced by this cap so fitness stays finite
VALUE_CAP = 1e12


@dataclass(frozen=True)
class PenaltyPolicy:
    coefficient: float = 1e9

    def __post_init__(self):
        if not self.coefficient > 0:
            raise ConfigurationError(f"penalty coefficient must be positive, got {self.coefficient}")


def penalized_fitness(objective: float, violations, policy: PenaltyPolicy = PenaltyPolicy()) -> float:
    """Objective plus ``coefficient * sum(violations)``."""
    total = math.fsum(violations)
    if total == 0.0:
        return float(objective)
    return float(objective) + policy.coefficient * total


def apply_discrete(x, discrete) -> np.ndarray:
    """Round the coordinates that the mask marks as discrete."""
    x = np.array(x, dtype=float)
    for k, rule in enumerate(discrete):
        if rule is None:
            continue
        if rule == "integer":
            x[k] = np.round(x[k])
        else:
            x[k] = np.round(x[k] / rule) * rule
    return x


def _violations(g) -> list[float]:
    out = []
    for gi in g:
        if not math.isfinite(gi) or gi > VALUE_CAP:
            out.append(VALUE_CAP)
        else:
            out.append(gi if gi > 0.0 else 0.0)
    return out


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    dimension: int
    bounds: Bounds
    objective: Callable
    kind: str = "benchmark"
    constraints: Optional[Callable] = None
    n_constraints: int = 0
    discrete: tuple = ()
    penalty: PenaltyPolicy = field(default_factory=PenaltyPolicy)

    @property
    def is_engineering(self) -> bool:
        return self.kind == "engineering"

    def round(self, x) -> np.ndarray:
        if not any(rule is not None for rule in self.discrete):
            return np.asarray(x, dtype=float)
        return apply_discrete(x, self.discrete)

    def evaluate(self, x) -> tuple[float, list[float]]:
        """Objective and per-constraint violations ``max(0, g_i)`` at rounded ``x``."""
        x = self._checked(x)
        if not self.is_engineering:
            return float(self.objective(x)), []
        values = self.round(x).tolist()
        obj = self.objective(values)
        if not math.isfinite(obj):
            obj = VALUE_CAP
        return float(obj), _violations(self.constraints(values))

    def _checked(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,):
            raise ConfigurationError(
                f"{self.name} expects a vector of length {self.dimension}, got shape {x.shape}")
        return x

    def fitness(self, x) -> float:
        if not self.is_engineering:
            return float(self.objective(self._checked(x)))
        obj, viol = self.evaluate(x)
        return penalized_fitness(obj, viol, self.penalty)

    def describe(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "dimension": self.dimension,
            "lower": self.bounds.lower.tolist(),
            "upper": self.bounds.upper.tolist(),
            "n_constraints": self.n_constraints,
            "discrete": [rule for rule in self.discrete] or [None] * self.dimension,
        }


def canonical_name(name: str) -> str:
    key = name.strip()
    if key.upper() in _eng.PROBLEMS:
        return key.upper()
    low = key.lower()
    low = _bm.ALIASES.get(low, low)
    if low in _bm.CLASSIC or low in _bm.SHIFTED_ROTATED:
        return low
    raise CatalogError(f"unknown problem {name!r}; known: {', '.join(catalog_names())}")


def benchmark_names() -> list[str]:
    return list(_bm.CLASSIC) + list(_bm.SHIFTED_ROTATED)


def engineering_names() -> list[str]:
    return list(_eng.PROBLEMS)


def catalog_names() -> list[str]:
    return benchmark_names() + engineering_names()


def is_engineering(name: str) -> bool:
    return canonical_name(name) in _eng.PROBLEMS


def _engineering_spec(p: EngineeringProblem, penalty: PenaltyPolicy) -> ProblemSpec:
    d = len(p.lower)
    return ProblemSpec(
        name=p.name,
        dimension=d,
        bounds=Bounds(np.array(p.lower), np.array(p.upper)),
        objective=p.objective,
        kind="engineering",
        constraints=p.constraints,
        n_constraints=p.n_constraints,
        discrete=tuple(p.discrete) if p.discrete else (None,) * d,
        penalty=penalty,
    )


def get_problem(name: str, dimension: Optional[int] = None,
                penalty: Optional[PenaltyPolicy] = None) -> ProblemSpec:
    """Look up a catalog problem.

    Benchmark functions take any ``dimension`` (default 10); engineering
    problems have a fixed dimension and reject a conflicting one.
    """
    key = canonical_name(name)
    penalty = penalty or PenaltyPolicy()
    if key in _eng.PROBLEMS:
        spec = _engineering_spec(_eng.PROBLEMS[key], penalty)
        if dimension is not None and dimension != spec.dimension:
            raise ConfigurationError(f"{key} has fixed dimension {spec.dimension}, got {dimension}")
        return spec
    d = DEFAULT_BENCHMARK_DIMENSION if dimension is None else int(dimension)
    if key in _bm.CLASSIC:
        fn, (lo, hi), min_dim = _bm.CLASSIC[key]
    else:
        fn, (lo, hi), min_dim = None, _bm.SHIFTED_ROTATED_BOUNDS, 1
    if d < min_dim:
        raise ConfigurationError(f"{key} needs dimension >= {min_dim}, got {d}")
    if fn is None:
        fn = _bm.ShiftedRotated(key, d)
    return ProblemSpec(
        name=key,
        dimension=d,
        bounds=Bounds.uniform(lo, hi, d),
        objective=fn,
        discrete=(None,) * d,
        penalty=penalty,
    )


def evaluate_benchmark(name: str, x) -> float:
    x = np.asarray(x, dtype=float)
    spec = get_problem(name, x.size)
    if spec.is_engineering:
        raise CatalogError(f"{spec.name} is an engineering problem, not a benchmark")
    return spec.fitness(x)


def evaluate_engineering(name: str, x) -> tuple[float, list[float]]:
    spec = get_problem(name)
    if not spec.is_engineering:
        raise CatalogError(f"{spec.name} is a benchmark, not an engineering problem")
    return spec.evaluate(x)


def manifest() -> list[dict]:
    """Machine-readable catalog description (JSON-serializable)."""
    out = []
    for name in benchmark_names():
        entry = get_problem(name).describe()
        entry["variable_dimension"] = True
        out.append(entry)
    for name in engineering_names():
        entry = get_problem(name).describe()
        entry["variable_dimension"] = False
        entry["known_optimum"] = _eng.PROBLEMS[name].known_optimum
        out.append(entry)
    return out
