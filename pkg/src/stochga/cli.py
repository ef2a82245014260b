"""Command-line front end: generate scenarios, run experiments, export results.

Subcommands: ``gen-scenario``, ``bench-circles``, ``bench-plane``,
``plan-path``, ``replay``.  Exit codes: 0 success, 1 usage error, 2 runtime
error.  All artifacts are JSON (reports, scenarios, trajectories) or CSV
(per-generation history) and are written atomically; re-running any command
with the same seed reproduces them byte for byte.  ``STOCHGA_OUT_DIR`` sets
the directory used when ``--out`` is a bare file name.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from .benchmarks import (
    report_to_dict,
    run_experiment,
    run_replicated,
    write_history_csv,
    write_json_atomic,
)
from .scenarios import (
    ExperimentScenario,
    gen_circle_scenario,
    gen_path_scenario,
    gen_plane_scenario,
    scenario_from_dict,
    scenario_to_dict,
)

__all__ = ["main", "entry_point"]

OUT_DIR_ENV = "STOCHGA_OUT_DIR"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage problems; the contract here is 1.
    def error(self, message):
        raise _UsageError(message)


def _add_ga_flags(parser, pop, gens, crossover, mutation):
    parser.add_argument("--pop", type=int, default=pop, help="population size")
    parser.add_argument("--gens", type=int, default=gens, help="number of generations")
    parser.add_argument("--crossover", type=float, default=crossover, help="crossover probability")
    parser.add_argument("--mutation", type=float, default=mutation, help="per-coordinate mutation probability")
    parser.add_argument("--elite", type=int, default=2, help="elite count")


def _add_penalty_flags(parser, max_penalty, alpha, target, steepness):
    parser.add_argument("--max-penalty", type=float, default=max_penalty, help="penalty ceiling")
    parser.add_argument("--alpha", type=float, default=alpha, help="tail level anchoring the penalty ramp")
    parser.add_argument("--target", type=float, default=target, help="feasibility probability at the ramp center")
    parser.add_argument("--steepness", type=float, default=steepness, help="penalty ramp steepness")


def build_parser() -> _Parser:
    parser = _Parser(prog="stochga", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="command")

    def common(p):
        p.add_argument("--seed", type=int, default=0, help="scenario seed")
        p.add_argument("--out", type=Path, required=True, help="output file")
        p.add_argument("--runs", type=int, default=1, help="number of replicate GA runs")

    p = sub.add_parser("gen-scenario", help="write a scenario file without running it")
    p.add_argument("--kind", choices=["circles", "plane", "path"], required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--variant", type=int, default=1, help="path corridor variant (path kind)")
    p.add_argument("--readings", type=int, default=10, help="readings per region/obstacle")

    p = sub.add_parser("bench-circles", help="Rastrigin over a union of noisy discs")
    common(p)
    p.add_argument("--m", type=int, default=7, help="number of feasible discs")
    p.add_argument("--readings", type=int, default=10, help="readings per disc center")
    p.add_argument("--radius", type=float, default=10.0, help="disc radius")
    p.add_argument("--squared-radius", action="store_true",
                   help="use radius sqrt(10), the squared-distance convention")
    _add_ga_flags(p, 80, 100, 0.5, 0.025)
    _add_penalty_flags(p, 7200.0, 0.05, 0.05, 10000.0)

    p = sub.add_parser("bench-plane", help="Schwefel over a regression-divided plane")
    common(p)
    p.add_argument("--n1", type=int, default=30, help="linear-boundary observations")
    p.add_argument("--n2", type=int, default=100, help="nonlinear-boundary observations")
    p.add_argument("--bandwidth", type=float, default=3.0, help="kernel regression bandwidth")
    p.add_argument("--noise-linear", type=float, default=5.0, help="linear boundary noise sd")
    p.add_argument("--noise-kernel", type=float, default=2.0, help="nonlinear boundary noise sd")
    _add_ga_flags(p, 50, 100, 0.9, 0.075)
    _add_penalty_flags(p, 18000.0, 0.05, 0.30, 200.0)

    p = sub.add_parser("plan-path", help="plan a spline path through noisy obstacles")
    common(p)
    p.add_argument("--variant", type=int, default=1, help="corridor variant, 1-4")
    p.add_argument("--readings", type=int, default=10, help="readings per obstacle")
    p.add_argument("--coeffs", type=int, default=3, help="free spline coefficients")
    p.add_argument("--theta-bound", type=float, default=80.0, help="coefficient search bound")
    p.add_argument("--no-obstacles", action="store_true")
    p.add_argument("--no-corridor", action="store_true")
    _add_ga_flags(p, 50, 100, 0.9, 0.075)
    _add_penalty_flags(p, 50.0, 0.01, 0.05, 200.0)

    p = sub.add_parser("replay", help="re-run a saved scenario file")
    p.add_argument("scenario", type=Path, help="scenario JSON file")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                   help="override a scenario field (seed, pop, gens)")
    return parser


def _resolve_out(path: Path) -> Path:
    base = os.environ.get(OUT_DIR_ENV)
    if base and not path.is_absolute() and path.parent == Path("."):
        return Path(base) / path
    return path


def _ga_from_args(args, seed):
    from .ga import GaConfig

    return GaConfig(
        population_size=args.pop,
        generations=args.gens,
        crossover_prob=args.crossover,
        mutation_prob=args.mutation,
        elite_count=args.elite,
        seed=seed,
    )


def _penalty_from_args(args):
    from .penalty import SmoothPenaltyParams

    return SmoothPenaltyParams(
        max_penalty=args.max_penalty,
        alpha=args.alpha,
        target=args.target,
        steepness=args.steepness,
    )


def _build_scenario(args) -> ExperimentScenario:
    if args.command == "bench-circles":
        return gen_circle_scenario(
            m=args.m,
            n=args.readings,
            seed=args.seed,
            radius=args.radius,
            squared_radius_mode=args.squared_radius,
            ga=_ga_from_args(args, args.seed),
            penalty=_penalty_from_args(args),
        )
    if args.command == "bench-plane":
        return gen_plane_scenario(
            n1=args.n1,
            n2=args.n2,
            seed=args.seed,
            noise_sd_linear=args.noise_linear,
            noise_sd_kernel=args.noise_kernel,
            bandwidth=args.bandwidth,
            ga=_ga_from_args(args, args.seed),
            penalty=_penalty_from_args(args),
        )
    return gen_path_scenario(
        variant=args.variant,
        n_readings=args.readings,
        seed=args.seed,
        include_obstacles=not args.no_obstacles,
        include_corridor=not args.no_corridor,
        n_free_coeffs=args.coeffs,
        ga=_ga_from_args(args, args.seed),
        penalty=_penalty_from_args(args),
    )


def _apply_overrides(scenario: ExperimentScenario, overrides) -> ExperimentScenario:
    for item in overrides:
        key, _, value = item.partition("=")
        if not value:
            raise _UsageError(f"override must look like KEY=VALUE, got {item!r}")
        if key == "seed":
            scenario = scenario.with_seed(int(value))
        elif key == "pop":
            scenario = replace(scenario, ga=replace(scenario.ga, population_size=int(value)))
        elif key == "gens":
            scenario = replace(scenario, ga=replace(scenario.ga, generations=int(value)))
        else:
            raise _UsageError(f"unknown override key {key!r} (supported: seed, pop, gens)")
    return scenario


def _run_and_write(scenario: ExperimentScenario, out: Path, runs: int) -> None:
    out = _resolve_out(out)
    if runs <= 1:
        report = run_experiment(scenario)
        payload = report_to_dict(report)
        history = report.history
    else:
        result = run_replicated(scenario, runs)
        best = result.best_report
        payload = report_to_dict(best)
        payload["replicates"] = {
            "runs": runs,
            "mean_best_curve": result.mean_best_curve.tolist(),
            "mean_mean_curve": result.mean_mean_curve.tolist(),
            "best_objectives": [r.best_objective for r in result.reports],
        }
        history = best.history
    write_json_atomic(out, payload)
    write_history_csv(out.parent / "history.csv", history)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError("a command is required")
        if args.command == "gen-scenario":
            if args.kind == "circles":
                scenario = gen_circle_scenario(n=args.readings, seed=args.seed)
            elif args.kind == "plane":
                scenario = gen_plane_scenario(seed=args.seed)
            else:
                scenario = gen_path_scenario(
                    variant=args.variant, n_readings=args.readings, seed=args.seed
                )
            write_json_atomic(_resolve_out(args.out), scenario_to_dict(scenario))
            return 0
        if args.command == "replay":
            try:
                payload = json.loads(Path(args.scenario).read_text())
                scenario = scenario_from_dict(payload)
            except (OSError, ValueError) as exc:
                print(f"error: cannot load scenario: {exc}", file=sys.stderr)
                return 2
            scenario = _apply_overrides(scenario, args.override)
            _run_and_write(scenario, args.out, args.runs)
            return 0
        scenario = _build_scenario(args)
        _run_and_write(scenario, args.out, args.runs)
        return 0
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)
    except (OSError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry_point() -> None:
    sys.exit(main())
