import numpy as np
import pytest

from battleopt.baselines import (
    DEFAULT_PARAMETERS,
    BaselineConfig,
    binomial_crossover,
    de_mutant,
    de_optimize,
    pso_inertia,
    pso_optimize,
    pso_velocity,
    random_search,
    woa_a,
    woa_optimize,
    woa_update,
)
from battleopt.core import Bounds, ConfigurationError, make_rng
from battleopt.problems import get_problem

OPTIMIZERS = {"DE": de_optimize, "PSO": pso_optimize, "WOA": woa_optimize,
              "RANDOM": random_search}


def test_de_zero_differential_returns_base():
    base, a, b = np.array([1.0, 2.0]), np.array([5.0, -3.0]), np.array([0.5, 9.0])
    mutant = de_mutant(base, a, b, 0.0)
    assert np.array_equal(mutant, base)
    assert np.array_equal(binomial_crossover(np.zeros(2), mutant, np.full(2, 0.5), 1.0, 0), base)


def test_de_hand_computed_mutant():
    pop = np.array([(1, 0), (0, 1), (-1, 0), (0, -1)], dtype=float)
    r1, r2, r3 = 0, 1, 2
    assert de_mutant(pop[r1], pop[r2], pop[r3], 0.8) == pytest.approx([1.8, 0.8], abs=1e-15)


def test_crossover_floor_only_j_rand():
    target, mutant = np.zeros(5), np.ones(5)
    trial = binomial_crossover(target, mutant, np.full(5, 0.7), 0.0, 3)
    assert trial.tolist() == [0, 0, 0, 1, 0]


def test_de_needs_four_members():
    with pytest.raises(ConfigurationError):
        de_optimize(get_problem("sphere", 2), BaselineConfig("DE", population_size=3))


def test_pso_fixed_point():
    x = np.array([0.3, -0.2])
    v = pso_velocity(np.zeros(2), x, x, x, 0.9, 2.05, 2.05, np.full(2, 0.6), np.full(2, 0.1))
    assert np.array_equal(v, np.zeros(2))
    assert np.array_equal(x + v, x)


def test_pso_inertia_schedule():
    assert pso_inertia(0, 1000) == 0.9
    assert pso_inertia(1000, 1000) == 0.4
    assert pso_inertia(500, 1000) == pytest.approx(0.65, abs=1e-15)


def test_pso_pure_drift():
    v, x = np.array([0.5, -1.0]), np.array([2.0, 2.0])
    new_v = pso_velocity(v, x, np.zeros(2), np.ones(2), 1.0, 0.0, 0.0, np.ones(2), np.ones(2))
    assert np.array_equal(new_v, v)
    assert np.array_equal(x + new_v, [2.5, 1.0])


def test_woa_end_of_schedule_is_leader():
    leader = np.array([1.0, -2.0])
    out = woa_update(np.array([5.0, 5.0]), leader, np.zeros(2), a=0.0, r1=0.3, r2=0.7, p=0.2, l=0.4)
    assert np.array_equal(out, leader)


def test_woa_zero_distance_spiral():
    leader = np.array([3.0, 4.0])
    assert np.array_equal(woa_update(leader.copy(), leader, None, 1.5, 0.2, 0.2, 0.9, 0.0), leader)


def test_woa_schedule():
    assert woa_a(0, 100) == 2.0
    assert woa_a(50, 100) == 1.0
    assert woa_a(100, 100) == 0.0


def test_defaults_and_overrides():
    cfg = BaselineConfig("de", parameters={"F": 0.5})
    assert cfg.algorithm == "DE"
    assert cfg.parameters == {"F": 0.5, "CR": 0.9}
    assert BaselineConfig("PSO").parameters == DEFAULT_PARAMETERS["PSO"]
    with pytest.raises(ConfigurationError):
        BaselineConfig("DE", parameters={"G": 1})
    with pytest.raises(ConfigurationError):
        BaselineConfig("GA")


def test_random_search_single_evaluation():
    problem = get_problem("sphere", 3)
    trace = random_search(problem, BaselineConfig("RANDOM", population_size=5, max_evaluations=1,
                                                  seed=8))
    expected = problem.bounds.lower + make_rng(8).random((5, 3))[0] * problem.bounds.span
    assert trace.evaluations == 1
    assert np.array_equal(trace.final_best.position, expected)
    assert trace.best_fitness == problem.fitness(expected)


def test_random_search_degenerate_box():
    class Point:
        name = "point"
        bounds = Bounds([2.0, -1.0], [2.0, -1.0])
        dimension = 2

        @staticmethod
        def fitness(x):
            return float(x[0] ** 2 + x[1] ** 2)

    trace = random_search(Point(), BaselineConfig("RANDOM", population_size=4, max_evaluations=9))
    assert trace.best_fitness == 5.0


@pytest.mark.slow
def test_random_search_never_hits_sphere_minimum():
    problem = get_problem("sphere", 10)
    best = [random_search(problem, BaselineConfig("RANDOM", max_evaluations=10_000, seed=s))
            .best_fitness for s in range(30)]
    assert np.mean(best) > 0 and min(best) > 0


@pytest.mark.parametrize("name", sorted(OPTIMIZERS))
@pytest.mark.parametrize("budget", [4, 250, 301])
def test_budget_and_monotone_trace(name, budget):
    problem = get_problem("rastrigin", 4)
    trace = OPTIMIZERS[name](problem, BaselineConfig(name, population_size=10,
                                                      max_evaluations=budget, seed=1))
    assert trace.evaluations == budget
    assert trace.algorithm == name
    best = [f for _, f in trace.checkpoints]
    assert all(a >= b for a, b in zip(best, best[1:]))
    assert trace.checkpoints[-1][0] == budget


@pytest.mark.parametrize("name", ["DE", "PSO", "WOA"])
def test_population_methods_beat_random_on_sphere(name):
    problem = get_problem("sphere", 5)
    scores = []
    for alg in (name, "RANDOM"):
        cfg = BaselineConfig(alg, population_size=20, max_evaluations=4000, seed=2)
        scores.append(OPTIMIZERS[alg](problem, cfg).best_fitness)
    assert scores[0] < scores[1]


@pytest.mark.parametrize("name", sorted(OPTIMIZERS))
def test_deterministic(name):
    problem = get_problem("ackley", 3)
    cfg = dict(population_size=8, max_evaluations=200, seed=5)
    a = OPTIMIZERS[name](problem, BaselineConfig(name, **cfg))
    b = OPTIMIZERS[name](problem, BaselineConfig(name, **cfg))
    assert a.checkpoints == b.checkpoints
