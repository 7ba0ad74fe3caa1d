import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from battleopt.core import (
    Bounds,
    BudgetExhausted,
    ConfigurationError,
    Individual,
    Population,
    Tracker,
    clamp_to_bounds,
    elite_replace,
    make_rng,
    refresh_extremes,
    uniform_init,
)


class FixedUniform:
    """Generator stand-in whose uniform draws are all one value."""

    def __init__(self, u):
        self.u = u

    def random(self, size):
        return np.full(size, self.u)


def test_bounds_validation():
    with pytest.raises(ConfigurationError):
        Bounds([1.0, 0.0], [0.0, 1.0])
    with pytest.raises(ConfigurationError):
        Bounds([0.0], [1.0, 2.0])
    with pytest.raises(ConfigurationError):
        Bounds([], [])
    b = Bounds([0, 0], [1, 2])
    assert b.dimension == 2
    assert b.contains([1, 2]) and not b.contains([1.5, 0])


@pytest.mark.parametrize("bounds, u, expected", [
    (Bounds.uniform(0, 1, 3), 0.0, [0.0, 0.0, 0.0]),
    (Bounds.uniform(-5, 5, 2), 0.5, [0.0, 0.0]),
    (Bounds([2, 2], [2, 2]), 0.37, [2.0, 2.0]),
])
def test_uniform_init_examples(bounds, u, expected):
    pop = uniform_init(bounds, 4, FixedUniform(u))
    assert pop.positions.shape == (4, bounds.dimension)
    assert np.all(pop.positions == np.array(expected))
    assert np.all(np.isnan(pop.fitness))
    assert all(m.fitness is None for m in pop.members)


def test_uniform_init_errors():
    with pytest.raises(ConfigurationError):
        uniform_init(Bounds.uniform(0, 1, 2), 1, make_rng(0))


def test_uniform_init_inside_box():
    b = Bounds([-1, 10, 0], [1, 20, 0])
    pop = uniform_init(b, 200, make_rng(3))
    assert all(b.contains(x) for x in pop.positions)


@pytest.mark.parametrize("x, expected", [
    ([7, -7], [5, -5]),
    ([0, 0], [0, 0]),
    ([5, 5], [5, 5]),
])
def test_clamp_examples(x, expected):
    assert np.array_equal(clamp_to_bounds(np.array(x, float), Bounds.uniform(-5, 5, 2)), expected)


@given(st.lists(st.floats(-1e6, 1e6), min_size=3, max_size=3))
def test_clamp_is_projection(x):
    b = Bounds([-1, 0, 2], [1, 0, 3])
    y = clamp_to_bounds(np.array(x), b)
    assert b.contains(y)
    assert np.array_equal(clamp_to_bounds(y, b), y)


@pytest.mark.parametrize("cand_f, keep_candidate", [(2.0, True), (3.0, False), (4.0, False)])
def test_elite_replace(cand_f, keep_candidate):
    inc = Individual(np.zeros(2), 3.0)
    cand = Individual(np.ones(2), cand_f)
    assert (elite_replace(inc, cand) is cand) == keep_candidate


def test_elite_replace_needs_fitness():
    with pytest.raises(RuntimeError):
        elite_replace(Individual(np.zeros(1)), Individual(np.zeros(1), 1.0))


@pytest.mark.parametrize("fitness, best, worst", [
    ([5, 1, 9], 1, 2),
    ([2, 2, 2], 0, 0),
    ([1, 9], 0, 1),
])
def test_refresh_extremes(fitness, best, worst):
    pop = Population(np.zeros((len(fitness), 1)), np.array(fitness, float))
    refresh_extremes(pop)
    assert (pop.best_index, pop.worst_index) == (best, worst)


@settings(max_examples=50)
@given(st.lists(st.integers(0, 3), min_size=2, max_size=12), st.randoms())
def test_extremes_stable_under_tail_permutation(values, rnd):
    fit = np.array(values, float)
    pop = refresh_extremes(Population(np.zeros((fit.size, 1)), fit.copy()))
    # shuffle everything after the first occurrence of both extremes
    cut = max(pop.best_index, pop.worst_index) + 1
    tail = list(fit[cut:])
    rnd.shuffle(tail)
    shuffled = np.concatenate([fit[:cut], tail])
    pop2 = refresh_extremes(Population(np.zeros((fit.size, 1)), shuffled))
    assert (pop2.best_index, pop2.worst_index) == (pop.best_index, pop.worst_index)


def test_tracker_counts_and_checkpoints():
    t = Tracker(lambda x: float(x[0]), max_evaluations=7, stride=3)
    for v in [5, 6, 2, 3, 1, 4, 9]:
        t.evaluate(np.array([v], float))
    with pytest.raises(BudgetExhausted):
        t.evaluate(np.zeros(1))
    trace = t.finish("p", "a", 1, 2)
    assert trace.evaluations == 7
    assert trace.checkpoints == [(1, 5.0), (3, 2.0), (6, 1.0), (7, 1.0)]
    assert trace.final_best.fitness == 1.0
    assert trace.final_best.position.tolist() == [1.0]


def test_tracker_evaluate_many_stops_at_budget():
    t = Tracker(lambda x: 0.0, max_evaluations=3)
    out = t.evaluate_many(np.zeros((5, 2)))
    assert out.size == 3 and t.exhausted


def test_rng_is_reproducible():
    a = make_rng(42).random(5)
    b = make_rng(42).random(5)
    assert np.array_equal(a, b)
    # PCG64 stream is fixed across platforms; freeze the first draw
    assert make_rng(0).random() == pytest.approx(0.6369616873214543, abs=0)
