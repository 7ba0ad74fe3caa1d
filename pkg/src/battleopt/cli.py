"""Command line entry point.

Exit codes: 0 success, 1 usage or configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import harness
from .core import CatalogError, ConfigurationError
from .problems import get_problem, manifest

FORMATS = ("csv", "json", "markdown")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="battleopt", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("list", help="list catalog problems")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("run", help="run one algorithm on one problem")
    p.add_argument("--problem", default="sphere")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--algorithm", default="MBGO")
    p.add_argument("--population", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=None,
                   help="evaluation budget (default: 1000*D or 20000 for engineering)")
    p.add_argument("--out", default="battleopt-out")
    p.add_argument("--trace-stride", type=int, default=None)

    p = sub.add_parser("compare", help="run a full experiment from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=None, help="override base_seed")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--format", choices=FORMATS, default="markdown")

    p = sub.add_parser("stats", help="recompute reports from stored traces")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=FORMATS, default="markdown")
    return parser


def _cmd_list(args) -> int:
    entries = manifest()
    if args.format == "json":
        print(json.dumps(entries, indent=2))
        return 0
    for e in entries:
        suffix = " (any D)" if e["variable_dimension"] else ""
        print(f"{e['name']}\t{e['dimension']}{suffix}")
    return 0


def _cmd_run(args) -> int:
    problem = get_problem(args.problem, args.dim)
    budget = args.budget or harness.budget_for(problem)
    trace = harness.solve(problem, args.algorithm, budget, args.seed, args.population,
                          trace_stride=args.trace_stride)
    label = harness.problem_label(problem.name, problem.dimension)
    trace.problem = label
    path = Path(args.out) / f"{label}_{trace.algorithm}_seed{args.seed}.jsonl"
    harness.write_trace(trace, path)
    print(f"problem {label}")
    print(f"algorithm {trace.algorithm}")
    print(f"evaluations {trace.evaluations}")
    print(f"best_fitness {harness.format_float(trace.best_fitness)}")
    print("best_position " + " ".join(harness.format_float(v) for v in trace.final_best.position))
    return 0


def _cmd_compare(args) -> int:
    path = Path(args.config)
    if not path.is_file():
        raise UsageError(f"config file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc}") from None
    overrides = {"output_dir": args.out, "base_seed": args.seed, "trials": args.trials,
                 "max_evaluations": args.budget, "workers": args.workers}
    data.update({k: v for k, v in overrides.items() if v is not None})
    cfg = harness.ExperimentConfig.from_dict(data)
    report = harness.run_experiment(cfg)
    sys.stdout.write(harness.render_report(report, args.format))
    return 0


def _cmd_stats(args) -> int:
    root = Path(args.out)
    if not (root / "config.json").is_file():
        raise UsageError(f"no experiment found in {root}")
    report = harness.recompute_report(root)
    sys.stdout.write(harness.render_report(report, args.format))
    return 0


COMMANDS = {"list": _cmd_list, "run": _cmd_run, "compare": _cmd_compare, "stats": _cmd_stats}


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage() + "battleopt: error: a subcommand is required")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return COMMANDS[args.command](args)
    except (UsageError, ConfigurationError, CatalogError) as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - report any failure as a runtime error
        print(f"battleopt: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
