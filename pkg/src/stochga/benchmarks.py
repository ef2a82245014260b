"""Benchmark objectives, scenario realization, and experiment runners.

``realize`` turns a scenario record into a concrete problem: it regenerates
the observation data from the scenario seed, fits the feasibility models, and
exposes the penalized fitness the genetic algorithm maximizes.  Everything
downstream of the seed is deterministic, so re-running a saved scenario
reproduces its report exactly.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from .feasibility import (
    ABOVE_IS_FEASIBLE,
    BELOW_IS_FEASIBLE,
    band_gamma_values,
    fit_gaussian_cloud,
    fit_linear_regression,
    fit_nadaraya_watson,
    gamma_circle,
    gamma_linreg,
    gamma_nw,
)
from .ga import GaConfig, SearchBox, run_ga
from .geometry import ellipse_from_readings
from .penalty import smooth_gamma_penalty
from .planner import (
    PathEnvironment,
    fit_corridor,
    objective_parts,
    path_plan_payload,
    plan_path,
)
from .scenarios import (
    KIND_CIRCLES,
    KIND_PATH,
    KIND_PLANE,
    ExperimentScenario,
    PathGeometry,
    scenario_to_dict,
)
from .splines import build_basis
from .stats import norm_cdf

__all__ = [
    "rastrigin",
    "schwefel",
    "realize",
    "CirclesProblem",
    "PlaneProblem",
    "PathProblem",
    "ExperimentReport",
    "run_experiment",
    "run_replicated",
    "ReplicatedResult",
    "report_to_dict",
    "write_json_atomic",
    "write_history_csv",
]


def rastrigin(x):
    """Multimodal benchmark: 20 + sum(x_i^2 - 10 cos(2 pi x_i)) over the last axis."""
    x = np.asarray(x, dtype=float)
    return (10.0 * x.shape[-1] + (x * x - 10.0 * np.cos(2.0 * math.pi * x)).sum(axis=-1))


def schwefel(x):
    """Double-sum benchmark: sum over k of (sum_{j<=k} x_j)^2 over the last axis."""
    x = np.asarray(x, dtype=float)
    return (np.cumsum(x, axis=-1) ** 2).sum(axis=-1)


def _data_rng(scenario: ExperimentScenario) -> np.random.Generator:
    # Observation data always comes from the scenario seed itself; the GA
    # spawns its own child streams, so the two never collide.
    return np.random.default_rng(np.random.SeedSequence(scenario.seed))


@dataclass
class CirclesProblem:
    scenario: ExperimentScenario
    readings: np.ndarray  # (m, n, 2)
    fits: list
    box: SearchBox

    @classmethod
    def realize(cls, scenario: ExperimentScenario) -> "CirclesProblem":
        geo = scenario.geometry
        rng = _data_rng(scenario)
        centers = geo.centers()
        known_cov = geo.noise_sd**2 * np.eye(2)
        readings = np.empty((geo.n_regions, geo.n_readings, 2))
        fits = []
        for k in range(geo.n_regions):
            readings[k] = centers[k] + geo.noise_sd * rng.standard_normal((geo.n_readings, 2))
            fits.append(fit_gaussian_cloud(readings[k], known_covariance=known_cov))
        half = geo.box_half_width
        return cls(
            scenario=scenario,
            readings=readings,
            fits=fits,
            box=SearchBox(np.array([-half, -half]), np.array([half, half])),
        )

    def gammas(self, x) -> np.ndarray:
        r = self.scenario.geometry.radius
        return np.array([gamma_circle(x, fit, r) for fit in self.fits])

    def raw_objective(self, x) -> float:
        return float(rastrigin(x))

    def penalty_value(self, x) -> float:
        return smooth_gamma_penalty(self.gammas(x), self.scenario.penalty)

    def fitness(self, x) -> float:
        return -(self.raw_objective(x) + self.penalty_value(x))


@dataclass
class PlaneProblem:
    scenario: ExperimentScenario
    linear_data: tuple
    kernel_data: tuple
    linear_fit: object
    kernel_fit: object
    box: SearchBox

    @classmethod
    def realize(cls, scenario: ExperimentScenario) -> "PlaneProblem":
        geo = scenario.geometry
        rng = _data_rng(scenario)
        x1 = rng.uniform(-60.0, 60.0, geo.n_linear)
        y1 = geo.line_boundary(x1) + geo.noise_sd_linear * rng.standard_normal(geo.n_linear)
        x2 = rng.uniform(-60.0, 60.0, geo.n_kernel)
        y2 = geo.curve_boundary(x2) + geo.noise_sd_kernel * rng.standard_normal(geo.n_kernel)
        half = geo.box_half_width
        return cls(
            scenario=scenario,
            linear_data=(x1, y1),
            kernel_data=(x2, y2),
            linear_fit=fit_linear_regression(x1, y1),
            kernel_fit=fit_nadaraya_watson(x2, y2, bandwidth=geo.bandwidth),
            box=SearchBox(np.array([-half, -half]), np.array([half, half])),
        )

    def gammas(self, x) -> np.ndarray:
        # Feasible above the fitted line, or below the fitted curve.
        return np.array(
            [
                gamma_linreg(x, self.linear_fit, ABOVE_IS_FEASIBLE),
                gamma_nw(x, self.kernel_fit, BELOW_IS_FEASIBLE),
            ]
        )

    def raw_objective(self, x) -> float:
        return float(schwefel(x))

    def penalty_value(self, x) -> float:
        return smooth_gamma_penalty(self.gammas(x), self.scenario.penalty)

    def fitness(self, x) -> float:
        return -(self.raw_objective(x) + self.penalty_value(x))

    def objective_grid(self, x1, x2) -> np.ndarray:
        """Vectorized penalized objective on the grid x1 (columns) by x2 (rows).

        Matches the scalar path (asserted in the test suite); used by the
        brute-force grid cross-check and contour plotting.
        """
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        X1, X2 = np.meshgrid(x1, x2)
        raw = schwefel(np.stack([X1, X2], axis=-1))
        line = self.linear_fit.predict(x1)
        line_se = self.linear_fit.band_se(x1)
        g_line = band_gamma_values(
            line[None, :] - X2,
            np.broadcast_to(line_se[None, :], X2.shape),
            self.linear_fit.df,
        )
        curve, curve_se = self.kernel_fit.band(x1)
        g_curve = band_gamma_values(
            X2 - curve[None, :],
            np.broadcast_to(curve_se[None, :], X2.shape),
            0,
        )
        params = self.scenario.penalty
        ramp = params.anchor + math.sqrt(params.steepness) * (
            params.target - np.maximum(g_line, g_curve)
        )
        return raw + params.max_penalty * norm_cdf(ramp)


# Default obstacle abscissae; ordinates are staggered around the corridor middle.
_OBSTACLE_XS = (25.0, 50.0, 75.0, 100.0, 125.0)
_OBSTACLE_STAGGER = 6.0


def _corridor_middle(variant: int, xs: np.ndarray) -> np.ndarray:
    if variant == 1:
        return np.piecewise(
            xs,
            [xs <= 30.0, (xs > 30.0) & (xs <= 100.0), xs > 100.0],
            [lambda x: x, lambda x: 60.0 - x, lambda x: x - 140.0],
        )
    if variant == 2:
        return 30.0 * np.sin(xs / 45.0)
    if variant == 3:
        return 30.0 * np.cos(xs / 25.0) - 19.5
    return np.zeros_like(xs)


def default_obstacle_centers(variant: int, xs=None) -> np.ndarray:
    xs = np.asarray(_OBSTACLE_XS if xs is None else xs, dtype=float)
    mids = _corridor_middle(variant, xs)
    stagger = _OBSTACLE_STAGGER * (-1.0) ** np.arange(xs.size)
    return np.column_stack([xs, mids + stagger])


def _corridor_data(geo: PathGeometry, rng: np.random.Generator):
    """Sample the corridor boundary observations for the variant (drawn before
    the obstacle readings so corridor data does not depend on n_readings)."""
    if geo.variant == 1:
        n = geo.corridor_obs_per_segment
        pieces = [
            # (x-range, level at x=0, slope, noise sd, side)
            ((0.0, 30.0), 20.0, 1.0, 1.0, "upper"),
            ((0.0, 30.0), -20.0, 1.0, 1.0, "lower"),
            ((30.0, 100.0), 80.0, -1.0, 2.0, "upper"),
            ((30.0, 100.0), 40.0, -1.0, 2.0, "lower"),
            ((100.0, 150.0), -120.0, 1.0, 1.0, "upper"),
            ((100.0, 150.0), -160.0, 1.0, 1.0, "lower"),
        ]
        upper, lower = [], []
        for (lo, hi), level, slope, sd, side in pieces:
            xs = rng.uniform(lo, hi, n)
            ys = level + slope * xs + sd * rng.standard_normal(n)
            (upper if side == "upper" else lower).append((xs, ys))
        return upper, lower, "linear"
    n = geo.corridor_obs_nonlinear
    xs_upper = rng.uniform(0.0, geo.span, n)
    xs_lower = rng.uniform(0.0, geo.span, n)
    if geo.variant == 2:
        upper_curve = 20.0 + 30.0 * np.sin(xs_upper / 45.0)
        lower_curve = -20.0 + 30.0 * np.sin(xs_lower / 45.0)
    elif geo.variant == 3:
        upper_curve = 1.0 + 30.0 * np.cos(xs_upper / 25.0)
        lower_curve = -40.0 + 30.0 * np.cos(xs_lower / 25.0)
    else:
        upper_curve = 40.0 - 30.0 * np.sin(xs_upper / 30.0)
        lower_curve = -40.0 + 30.0 * np.sin(xs_lower / 30.0)
    upper = [(xs_upper, upper_curve + rng.standard_normal(n))]
    lower = [(xs_lower, lower_curve + rng.standard_normal(n))]
    return upper, lower, "local_quadratic"


@dataclass
class PathProblem:
    scenario: ExperimentScenario
    environment: PathEnvironment
    centers: np.ndarray
    readings: Optional[np.ndarray]  # (m, n, 2)
    box: SearchBox

    @classmethod
    def realize(cls, scenario: ExperimentScenario) -> "PathProblem":
        geo = scenario.geometry
        rng = _data_rng(scenario)
        corridor = None
        if geo.include_corridor:
            upper, lower, kind = _corridor_data(geo, rng)
            corridor = fit_corridor(upper, lower, kind=kind, bandwidth=geo.corridor_bandwidth)
        ellipses = []
        readings = None
        centers = default_obstacle_centers(geo.variant, geo.obstacle_xs)
        if geo.include_obstacles:
            sigma = geo.sigma_matrix()
            chol = np.linalg.cholesky(sigma)
            readings = np.empty((len(centers), geo.n_readings, 2))
            for k, center in enumerate(centers):
                noise = rng.standard_normal((geo.n_readings, 2)) @ chol.T
                readings[k] = center + noise
                ellipses.append(ellipse_from_readings(readings[k], sigma, geo.ellipse_gamma))
        else:
            centers = np.empty((0, 2))
        env = PathEnvironment(
            basis=build_basis(geo.span, geo.n_free_coeffs),
            ellipses=tuple(ellipses),
            corridor=corridor,
            clearance_radius=geo.obstacle_radius,
        )
        bound = geo.theta_bound
        dim = env.basis.n_free
        return cls(
            scenario=scenario,
            environment=env,
            centers=centers,
            readings=readings,
            box=SearchBox(np.full(dim, -bound), np.full(dim, bound)),
        )

    def raw_objective(self, theta) -> float:
        return self.environment.path_length(theta)

    def penalty_value(self, theta) -> float:
        parts = objective_parts(theta, self.environment, self.scenario.penalty)
        return parts["obstacle_penalty"] + parts["corridor_penalty"]

    def fitness(self, theta) -> float:
        return -objective_parts(theta, self.environment, self.scenario.penalty)["total"]


_PROBLEMS = {
    KIND_CIRCLES: CirclesProblem,
    KIND_PLANE: PlaneProblem,
    KIND_PATH: PathProblem,
}


def realize(scenario: ExperimentScenario):
    """Regenerate the scenario's data from its seed and build the problem."""
    try:
        cls = _PROBLEMS[scenario.kind]
    except KeyError:
        raise ValueError(f"unknown scenario kind: {scenario.kind!r}") from None
    return cls.realize(scenario)


@dataclass
class ExperimentReport:
    scenario: ExperimentScenario
    seed: int
    best_candidate: np.ndarray
    best_objective: float  # raw objective at the best candidate (no penalty)
    penalty_at_best: float
    best_fitness: float
    history: np.ndarray = field(repr=False)
    wall_clock_s: float = 0.0
    trajectory: Optional[dict] = None


def run_experiment(scenario: ExperimentScenario) -> ExperimentReport:
    """Wire scenario -> feasibility models -> penalty -> GA and report the result."""
    started = time.perf_counter()
    problem = realize(scenario)
    if scenario.kind == KIND_PATH:
        plan = plan_path(
            problem.environment,
            scenario.penalty,
            scenario.ga,
            theta_bound=scenario.geometry.theta_bound,
        )
        ga_result = plan.ga
        best_objective = plan.parts["length"]
        penalty_at_best = plan.parts["obstacle_penalty"] + plan.parts["corridor_penalty"]
        trajectory = path_plan_payload(plan, problem.environment)
    else:
        ga_result = run_ga(problem.fitness, problem.box, scenario.ga)
        best_objective = problem.raw_objective(ga_result.best_candidate)
        penalty_at_best = problem.penalty_value(ga_result.best_candidate)
        trajectory = None
    elapsed = time.perf_counter() - started
    if ga_result.history.shape[0] != scenario.ga.generations + 1:
        raise AssertionError("history must have one record per generation plus the start")
    return ExperimentReport(
        scenario=scenario,
        seed=scenario.seed,
        best_candidate=ga_result.best_candidate,
        best_objective=float(best_objective),
        penalty_at_best=float(penalty_at_best),
        best_fitness=float(ga_result.best_fitness),
        history=ga_result.history,
        wall_clock_s=elapsed,
        trajectory=trajectory,
    )


@dataclass
class ReplicatedResult:
    reports: List[ExperimentReport]
    mean_best_curve: np.ndarray
    mean_mean_curve: np.ndarray

    @property
    def best_report(self) -> ExperimentReport:
        return max(self.reports, key=lambda r: r.best_fitness)


def derive_run_seeds(base_seed: int, n_runs: int) -> list:
    """Deterministic per-run GA seeds from one base seed."""
    state = np.random.SeedSequence(base_seed).generate_state(n_runs, dtype=np.uint64)
    return [int(s) for s in state]


def run_replicated(scenario: ExperimentScenario, n_runs: int) -> ReplicatedResult:
    """Average fitness curves over ``n_runs`` GA runs on the same scenario data.

    Run seeds are derived from the scenario seed; with ``n_runs == 1`` the
    aggregate curves equal the single run's history.
    """
    if n_runs < 1:
        raise ValueError("need at least one run")
    if n_runs == 1:
        seeds = [scenario.ga.seed]
    else:
        seeds = derive_run_seeds(scenario.seed, n_runs)
    reports = []
    for seed in seeds:
        run_scenario = ExperimentScenario(
            kind=scenario.kind,
            geometry=scenario.geometry,
            ga=GaConfig(
                population_size=scenario.ga.population_size,
                generations=scenario.ga.generations,
                crossover_prob=scenario.ga.crossover_prob,
                mutation_prob=scenario.ga.mutation_prob,
                elite_count=scenario.ga.elite_count,
                seed=seed,
            ),
            penalty=scenario.penalty,
            seed=scenario.seed,
        )
        reports.append(run_experiment(run_scenario))
    histories = np.stack([r.history for r in reports])
    return ReplicatedResult(
        reports=reports,
        mean_best_curve=histories[:, :, 0].mean(axis=0),
        mean_mean_curve=histories[:, :, 1].mean(axis=0),
    )


def report_to_dict(report: ExperimentReport) -> dict:
    """JSON payload of a report.

    Wall-clock time is deliberately omitted so identical seeds produce
    byte-identical artifacts.
    """
    payload = {
        "scenario": scenario_to_dict(report.scenario),
        "seed": report.seed,
        "best_candidate": np.asarray(report.best_candidate).tolist(),
        "best_objective": report.best_objective,
        "penalty_at_best": report.penalty_at_best,
        "best_fitness": report.best_fitness,
        "history": np.asarray(report.history).tolist(),
    }
    if report.trajectory is not None:
        payload["trajectory"] = report.trajectory
    return payload


def write_json_atomic(path, payload: dict) -> None:
    """Serialize to JSON via a temp file in the target directory, then rename."""
    path = Path(path)
    text = json.dumps(payload, indent=2, sort_keys=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent or Path("."), suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
            handle.write("\n")
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def write_history_csv(path, history) -> None:
    """Per-generation fitness table: header plus generations + 1 rows."""
    path = Path(path)
    history = np.asarray(history)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent or Path("."), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["generation", "best", "mean"])
            for gen, (best, mean) in enumerate(history):
                writer.writerow([gen, repr(float(best)), repr(float(mean))])
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
