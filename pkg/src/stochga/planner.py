"""Vehicle path planning over noisy obstacle and corridor observations.

The planner minimizes path length plus smooth penalties: one for coming
closer than a clearance radius to the union of obstacle confidence ellipses,
and one for the probability of leaving a corridor whose boundaries were
fitted from noisy samples.  Candidate paths are pinned cubic B-splines, so
the genetic algorithm searches over the interior spline coefficients only.

The environment precomputes everything that does not depend on the
candidate: design matrices on the evaluation grids and the corridor boundary
bands, which keeps a single objective evaluation at a few hundred
microseconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np

from .feasibility import (
    LinearRegressionFit,
    LocalQuadraticFit,
    band_gamma_values,
    fit_linear_regression,
    fit_local_quadratic,
)
from .ga import GaConfig, GaResult, SearchBox, run_ga
from .geometry import ConfidenceEllipse, min_distance_to_ellipses
from .penalty import SmoothPenaltyParams
from .splines import BSplineBasis, Trajectory, simpson_weights
from .stats import norm_cdf

__all__ = [
    "BoundarySegment",
    "CorridorBoundary",
    "Corridor",
    "fit_corridor",
    "PathEnvironment",
    "objective_Q",
    "objective_parts",
    "plan_path",
    "PathPlan",
]


@dataclass(frozen=True)
class BoundarySegment:
    fit: object  # LinearRegressionFit or LocalQuadraticFit
    x_lo: float
    x_hi: float


@dataclass(frozen=True)
class CorridorBoundary:
    """One side of the corridor, possibly stitched from several fitted pieces."""

    segments: Tuple[BoundarySegment, ...]

    def _segment_index(self, xs: np.ndarray) -> np.ndarray:
        # Dispatch each abscissa to the segment whose range it falls in,
        # clamping to the nearest segment outside all ranges.
        edges = [0.5 * (self.segments[i].x_hi + self.segments[i + 1].x_lo)
                 for i in range(len(self.segments) - 1)]
        return np.searchsorted(np.asarray(edges), xs)

    def band(self, xs) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Fitted level, standard error and t degrees of freedom (0 = normal band)."""
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        level = np.empty_like(xs)
        se = np.empty_like(xs)
        df = np.zeros(xs.size, dtype=int)
        which = self._segment_index(xs)
        for idx, segment in enumerate(self.segments):
            mask = which == idx
            if not np.any(mask):
                continue
            fit = segment.fit
            if isinstance(fit, LinearRegressionFit):
                level[mask] = fit.predict(xs[mask])
                se[mask] = fit.band_se(xs[mask])
                df[mask] = fit.df
            else:
                level[mask], se[mask] = fit.band(xs[mask])
        return level, se, df

    def predict(self, xs):
        return self.band(xs)[0]


@dataclass(frozen=True)
class Corridor:
    """Pair of fitted boundaries; the feasible side is between them."""

    upper: CorridorBoundary
    lower: CorridorBoundary


def _as_segments(boundary_data) -> list:
    # Accept a single (xs, ys) pair or a list of such pairs.
    items = list(boundary_data)
    if len(items) == 2:
        try:
            xs = np.asarray(items[0], dtype=float)
            ys = np.asarray(items[1], dtype=float)
            if xs.ndim == 1 and ys.ndim == 1 and xs.shape == ys.shape:
                return [(xs, ys)]
        except (TypeError, ValueError):
            pass
    return items


def _fit_boundary(boundary_data, kind: str, bandwidth) -> CorridorBoundary:
    segments = []
    for xs, ys in _as_segments(boundary_data):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if kind == "linear":
            fit = fit_linear_regression(xs, ys)
        elif kind == "local_quadratic":
            fit = fit_local_quadratic(xs, ys, bandwidth=bandwidth)
        else:
            raise ValueError("corridor kind must be 'linear' or 'local_quadratic'")
        segments.append(BoundarySegment(fit=fit, x_lo=float(xs.min()), x_hi=float(xs.max())))
    segments.sort(key=lambda s: s.x_lo)
    return CorridorBoundary(segments=tuple(segments))


def fit_corridor(upper_data, lower_data, kind: str = "linear", bandwidth="auto",
                 check_grid: Optional[np.ndarray] = None) -> Corridor:
    """Fit both corridor boundaries and orient them from the data.

    ``upper_data``/``lower_data`` are (xs, ys) pairs, or lists of pairs for a
    piecewise boundary.  Whichever fitted boundary sits higher on the check
    grid becomes the upper one; boundaries that cross are rejected as a
    degenerate corridor.
    """
    first = _fit_boundary(upper_data, kind, bandwidth)
    second = _fit_boundary(lower_data, kind, bandwidth)
    lo = min(seg.x_lo for seg in first.segments + second.segments)
    hi = max(seg.x_hi for seg in first.segments + second.segments)
    grid = np.linspace(lo, hi, 101) if check_grid is None else np.asarray(check_grid, float)
    gap = first.predict(grid) - second.predict(grid)
    if np.all(gap > 0.0):
        return Corridor(upper=first, lower=second)
    if np.all(gap < 0.0):
        return Corridor(upper=second, lower=first)
    raise ValueError("degenerate corridor: fitted boundaries cross")


@dataclass(frozen=True)
class PathEnvironment:
    """Immutable assembled scenario: basis, obstacle ellipses, corridor, clearance."""

    basis: BSplineBasis
    ellipses: Tuple[ConfidenceEllipse, ...]
    corridor: Optional[Corridor]
    clearance_radius: float
    n_graph: int = 400
    quad_panels: int = 200

    def __post_init__(self):
        object.__setattr__(self, "ellipses", tuple(self.ellipses))
        if self.clearance_radius <= 0.0:
            raise ValueError("clearance radius must be positive")

    @cached_property
    def graph_ts(self) -> np.ndarray:
        start, stop = self.basis.span
        return np.linspace(start, stop, self.n_graph)

    @cached_property
    def graph_design(self) -> np.ndarray:
        return self.basis.design_matrix(self.graph_ts)

    @cached_property
    def _quadrature(self):
        start, stop = self.basis.span
        ts, w = simpson_weights(start, stop, self.quad_panels)
        return self.basis.derivative_design_matrix(ts), w

    @cached_property
    def _corridor_bands(self):
        # (level, se, df) per boundary on the fixed graph grid; candidates only
        # move the ordinate, so the bands never need refitting.
        upper = self.corridor.upper.band(self.graph_ts)
        lower = self.corridor.lower.band(self.graph_ts)
        return upper, lower

    def full_coefficients(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if theta.size != self.basis.n_free:
            raise ValueError(f"expected {self.basis.n_free} coefficients, got {theta.size}")
        return np.concatenate([[0.0], theta, [0.0]])

    def graph_values(self, theta) -> np.ndarray:
        return self.graph_design @ self.full_coefficients(theta)

    def path_length(self, theta) -> float:
        deriv_design, w = self._quadrature
        slope = deriv_design @ self.full_coefficients(theta)
        return float(w @ np.sqrt(1.0 + slope * slope))

    def obstacle_distance(self, theta) -> float:
        """Distance from the sampled graph to the union of obstacle ellipses."""
        return self._obstacle_distance_from_values(self.graph_values(theta))

    def _obstacle_distance_from_values(self, ys) -> float:
        if not self.ellipses:
            return math.inf
        pts = np.column_stack([self.graph_ts, ys])
        return min_distance_to_ellipses(pts, self.ellipses)

    def corridor_gamma(self, theta) -> float:
        """Smallest per-sample probability of being inside the corridor."""
        return self._corridor_gamma_from_values(self.graph_values(theta))

    def _corridor_gamma_from_values(self, ys) -> float:
        if self.corridor is None:
            return 1.0
        (up_level, up_se, up_df), (lo_level, lo_se, lo_df) = self._corridor_bands
        g_upper = band_gamma_values(ys - up_level, up_se, up_df)
        g_lower = band_gamma_values(lo_level - ys, lo_se, lo_df)
        return float(np.minimum(g_upper, g_lower).min())


def objective_parts(theta, env: PathEnvironment, params: SmoothPenaltyParams,
                    clearance_radius: Optional[float] = None) -> dict:
    """Length, obstacle penalty and corridor penalty of one candidate."""
    r = env.clearance_radius if clearance_radius is None else float(clearance_radius)
    length = env.path_length(theta)
    root_slope = math.sqrt(params.steepness)
    ys = env.graph_values(theta)
    if env.ellipses:
        d_obs = env._obstacle_distance_from_values(ys)
        obstacle_penalty = params.max_penalty * norm_cdf(params.anchor + root_slope * (r - d_obs))
    else:
        d_obs = math.inf
        obstacle_penalty = 0.0
    if env.corridor is not None:
        gamma_corr = env._corridor_gamma_from_values(ys)
        corridor_penalty = params.max_penalty * norm_cdf(
            params.anchor + root_slope * (params.target - gamma_corr)
        )
    else:
        gamma_corr = 1.0
        corridor_penalty = 0.0
    return {
        "length": length,
        "obstacle_distance": d_obs,
        "obstacle_penalty": float(obstacle_penalty),
        "corridor_gamma": gamma_corr,
        "corridor_penalty": float(corridor_penalty),
        "total": length + float(obstacle_penalty) + float(corridor_penalty),
    }


def objective_Q(theta, env: PathEnvironment, params: SmoothPenaltyParams,
                clearance_radius: Optional[float] = None) -> float:
    """Path length plus smooth clearance and corridor penalties (to minimize)."""
    return objective_parts(theta, env, params, clearance_radius)["total"]


@dataclass
class PathPlan:
    """Outcome of one planning run, with the sampled best trajectory."""

    ga: GaResult
    trajectory: Trajectory
    parts: dict
    sample_ts: np.ndarray
    sample_ys: np.ndarray

    @property
    def best_q(self) -> float:
        return self.parts["total"]


def plan_path(env: PathEnvironment, params: SmoothPenaltyParams, ga_config: GaConfig,
              theta_bound: float = 80.0) -> PathPlan:
    """Minimize the penalized length over the free spline coefficients."""
    dim = env.basis.n_free
    box = SearchBox(np.full(dim, -theta_bound), np.full(dim, theta_bound))

    def fitness(theta):
        return -objective_Q(theta, env, params)

    result = run_ga(fitness, box, ga_config)
    best = Trajectory(basis=env.basis, theta=result.best_candidate)
    parts = objective_parts(result.best_candidate, env, params)
    return PathPlan(
        ga=result,
        trajectory=best,
        parts=parts,
        sample_ts=env.graph_ts.copy(),
        sample_ys=env.graph_values(result.best_candidate),
    )


def path_plan_payload(plan: PathPlan, env: PathEnvironment) -> dict:
    """JSON-ready export: trajectory samples, ellipse descriptors, corridor curves."""
    payload = {
        "objective": plan.parts,
        "best_theta": plan.trajectory.theta.tolist(),
        "samples": {
            "t": plan.sample_ts.tolist(),
            "f": plan.sample_ys.tolist(),
        },
        "ellipses": [
            {
                "center": e.center.tolist(),
                "semi_axes": e.semi_axes.tolist(),
                "rotation": e.rotation,
                "threshold": e.threshold,
            }
            for e in env.ellipses
        ],
    }
    if env.corridor is not None:
        xs = env.graph_ts
        payload["corridor"] = {
            "x": xs.tolist(),
            "upper": env.corridor.upper.predict(xs).tolist(),
            "lower": env.corridor.lower.predict(xs).tolist(),
        }
    return payload
