"""Time the compiled and pure-Python MBGO kernels against each other.

Usage::

    python3 benchmarks/bench_backends.py [--dims 10 100 1000] [--population 50]

Both backends run the same seeded problem, so the script also confirms that
they end on the same best fitness.
"""

import argparse
import time

from battleopt import _backend
from battleopt.mbgo import Mbgo, MbgoConfig
from battleopt.problems import get_problem


def time_run(problem, cfg, backend, repeats):
    best_time, trace = float("inf"), None
    for _ in range(repeats):
        start = time.perf_counter()
        trace = Mbgo(problem, cfg, backend=backend).run()
        best_time = min(best_time, time.perf_counter() - start)
    return best_time, trace.best_fitness


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--problem", default="sphere")
    parser.add_argument("--dims", type=int, nargs="+", default=[10, 100, 1000])
    parser.add_argument("--population", type=int, default=50)
    parser.add_argument("--generations", type=int, default=40)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args(argv)

    backends = sorted(_backend.AVAILABLE)
    print(f"{'D':>6} " + " ".join(f"{b + ' s':>12}" for b in backends) + f" {'speedup':>8}  same")
    for d in args.dims:
        problem = get_problem(args.problem, d)
        n = args.population
        cfg = MbgoConfig(population_size=n, max_evaluations=n * (2 * args.generations + 1), seed=1)
        results = {b: time_run(problem, cfg, b, args.repeats) for b in backends}
        times = [results[b][0] for b in backends]
        speedup = results["python"][0] / results["cython"][0] if "cython" in results else 1.0
        same = len({results[b][1] for b in backends}) == 1
        print(f"{d:>6} " + " ".join(f"{t:>12.4f}" for t in times) + f" {speedup:>8.2f}  {same}")


if __name__ == "__main__":
    main()
