"""Reproducible experiment scenarios and their JSON round-trip.

A scenario is a parameter record plus a seed; the observation data (readings,
boundary samples) are regenerated deterministically from the seed when the
scenario is realized, so a saved scenario file reproduces a run bit for bit.

Three kinds:

* ``circles`` — minimize the Rastrigin function over a union of discs whose
  centers are only known through Gaussian readings.
* ``plane_division`` — minimize the Schwefel double-sum function where the
  plane is split by a noisy line and a noisy nonlinear curve.
* ``path_planning`` — plan a spline path from (0, 0) to (span, 0) through
  obstacle readings and corridor samples.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .ga import GaConfig
from .penalty import SmoothPenaltyParams

__all__ = [
    "CirclesGeometry",
    "PlaneGeometry",
    "PathGeometry",
    "ExperimentScenario",
    "gen_circle_scenario",
    "gen_plane_scenario",
    "gen_path_scenario",
    "scenario_to_dict",
    "scenario_from_dict",
    "scenario_to_json",
    "scenario_from_json",
]

KIND_CIRCLES = "circles"
KIND_PLANE = "plane_division"
KIND_PATH = "path_planning"


@dataclass(frozen=True)
class CirclesGeometry:
    n_regions: int = 7
    n_readings: int = 10
    radius: float = 10.0
    noise_sd: float = 10.0 / 3.0
    center_step: float = 15.0
    center_offset: float = -60.0
    box_half_width: float = 60.0

    def centers(self) -> np.ndarray:
        ks = np.arange(1, self.n_regions + 1)
        diag = self.center_step * ks + self.center_offset
        return np.column_stack([diag, diag])


@dataclass(frozen=True)
class PlaneGeometry:
    n_linear: int = 30
    n_kernel: int = 100
    noise_sd_linear: float = 5.0
    noise_sd_kernel: float = 2.0
    bandwidth: float = 3.0
    box_half_width: float = 60.0

    @staticmethod
    def line_boundary(x1):
        return np.asarray(x1, dtype=float) + 20.0

    @staticmethod
    def curve_boundary(x1):
        x1 = np.asarray(x1, dtype=float)
        return x1 - 30.0 + 12.0 * np.sin(x1 / 5.0)


@dataclass(frozen=True)
class PathGeometry:
    variant: int = 1
    n_readings: int = 10
    rho: float = -0.8
    sigma1: float = 4.0
    sigma2: float = 6.0
    obstacle_radius: float = 4.0
    ellipse_gamma: float = 0.05
    n_free_coeffs: int = 3
    theta_bound: float = 80.0
    span: float = 150.0
    include_obstacles: bool = True
    include_corridor: bool = True
    obstacle_xs: Optional[Tuple[float, ...]] = None
    corridor_bandwidth: str | float = "auto"
    corridor_obs_per_segment: int = 30
    corridor_obs_nonlinear: int = 300

    def sigma_matrix(self) -> np.ndarray:
        cross = self.rho * self.sigma1 * self.sigma2
        return np.array([[self.sigma1**2, cross], [cross, self.sigma2**2]])


@dataclass(frozen=True)
class ExperimentScenario:
    kind: str
    geometry: object
    ga: GaConfig
    penalty: SmoothPenaltyParams
    seed: int

    def with_seed(self, seed: int) -> "ExperimentScenario":
        return replace(self, seed=seed, ga=replace(self.ga, seed=seed))


def gen_circle_scenario(
    m: int = 7,
    n: int = 10,
    seed: int = 0,
    radius: float = 10.0,
    squared_radius_mode: bool = False,
    ga: Optional[GaConfig] = None,
    penalty: Optional[SmoothPenaltyParams] = None,
) -> ExperimentScenario:
    """Union-of-discs scenario: centers on the diagonal at 15k - 60.

    ``squared_radius_mode`` switches the disc radius to sqrt(10), matching the
    constraint written as squared-distance minus 10 rather than the stated
    radius of 10; both conventions are exposed because the source geometry is
    ambiguous about which was meant.
    """
    if m < 1 or n < 2:
        raise ValueError("need at least one region and two readings")
    geometry = CirclesGeometry(
        n_regions=m,
        n_readings=n,
        radius=math.sqrt(10.0) if squared_radius_mode else radius,
    )
    ga = ga or GaConfig(
        population_size=80,
        generations=100,
        crossover_prob=0.5,
        mutation_prob=0.025,
        elite_count=2,
        seed=seed,
    )
    penalty = penalty or SmoothPenaltyParams(
        max_penalty=7200.0, alpha=0.05, target=0.05, steepness=10000.0
    )
    return ExperimentScenario(kind=KIND_CIRCLES, geometry=geometry, ga=ga, penalty=penalty, seed=seed)


def gen_plane_scenario(
    n1: int = 30,
    n2: int = 100,
    seed: int = 0,
    noise_sd_linear: float = 5.0,
    noise_sd_kernel: float = 2.0,
    bandwidth: float = 3.0,
    ga: Optional[GaConfig] = None,
    penalty: Optional[SmoothPenaltyParams] = None,
) -> ExperimentScenario:
    """Divided-plane scenario: feasible above a noisy line or below a noisy curve.

    Noise scales are standard deviations; set them to zero for the noiseless
    variant used by grid-search cross-checks.
    """
    if n1 < 3 or n2 < 10:
        raise ValueError("need n1 >= 3 linear and n2 >= 10 nonlinear observations")
    geometry = PlaneGeometry(
        n_linear=n1,
        n_kernel=n2,
        noise_sd_linear=noise_sd_linear,
        noise_sd_kernel=noise_sd_kernel,
        bandwidth=bandwidth,
    )
    ga = ga or GaConfig(
        population_size=50,
        generations=100,
        crossover_prob=0.9,
        mutation_prob=0.075,
        elite_count=2,
        seed=seed,
    )
    penalty = penalty or SmoothPenaltyParams(
        max_penalty=18000.0, alpha=0.05, target=0.30, steepness=200.0
    )
    return ExperimentScenario(kind=KIND_PLANE, geometry=geometry, ga=ga, penalty=penalty, seed=seed)


def gen_path_scenario(
    variant: int = 1,
    n_readings: int = 10,
    seed: int = 0,
    include_obstacles: bool = True,
    include_corridor: bool = True,
    obstacle_xs: Optional[Tuple[float, ...]] = None,
    n_free_coeffs: int = 3,
    ga: Optional[GaConfig] = None,
    penalty: Optional[SmoothPenaltyParams] = None,
) -> ExperimentScenario:
    """Path-planning scenario: spline from (0,0) to (150,0) with radius-4 obstacles.

    Variants pick the corridor family: 1 is three pairs of linear pieces,
    2 through 4 are sinusoid/cosinusoid pairs fitted by local quadratics.
    Observation noise pairs (sigma1, sigma2) follow the variant: (4, 6) for
    the odd variants and (4, 5) for the even ones, correlation -0.8 for all.
    """
    if variant not in (1, 2, 3, 4):
        raise ValueError("variant must be 1, 2, 3 or 4")
    sigma2 = 6.0 if variant in (1, 3) else 5.0
    geometry = PathGeometry(
        variant=variant,
        n_readings=n_readings,
        sigma2=sigma2,
        include_obstacles=include_obstacles,
        include_corridor=include_corridor,
        obstacle_xs=tuple(obstacle_xs) if obstacle_xs is not None else None,
        n_free_coeffs=n_free_coeffs,
    )
    ga = ga or GaConfig(
        population_size=50,
        generations=100,
        crossover_prob=0.9,
        mutation_prob=0.075,
        elite_count=2,
        seed=seed,
    )
    penalty = penalty or SmoothPenaltyParams(
        max_penalty=50.0, alpha=0.01, target=0.05, steepness=200.0
    )
    return ExperimentScenario(kind=KIND_PATH, geometry=geometry, ga=ga, penalty=penalty, seed=seed)


_GEOMETRY_TYPES = {
    KIND_CIRCLES: CirclesGeometry,
    KIND_PLANE: PlaneGeometry,
    KIND_PATH: PathGeometry,
}


def scenario_to_dict(scenario: ExperimentScenario) -> dict:
    return {
        "kind": scenario.kind,
        "geometry": asdict(scenario.geometry),
        "ga": asdict(scenario.ga),
        "penalty": asdict(scenario.penalty),
        "seed": scenario.seed,
    }


def scenario_from_dict(payload: dict) -> ExperimentScenario:
    try:
        kind = payload["kind"]
        geometry_cls = _GEOMETRY_TYPES[kind]
        geometry_fields = dict(payload["geometry"])
        if kind == KIND_PATH and geometry_fields.get("obstacle_xs") is not None:
            geometry_fields["obstacle_xs"] = tuple(geometry_fields["obstacle_xs"])
        return ExperimentScenario(
            kind=kind,
            geometry=geometry_cls(**geometry_fields),
            ga=GaConfig(**payload["ga"]),
            penalty=SmoothPenaltyParams(**payload["penalty"]),
            seed=int(payload["seed"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed scenario payload: {exc}") from exc


def scenario_to_json(scenario: ExperimentScenario) -> str:
    return json.dumps(scenario_to_dict(scenario), indent=2, sort_keys=True)


def scenario_from_json(text: str) -> ExperimentScenario:
    return scenario_from_dict(json.loads(text))
