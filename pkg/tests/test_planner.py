import math

import numpy as np
import pytest

from stochga.ga import GaConfig
from stochga.geometry import ConfidenceEllipse, dist_graph_to_set
from stochga.penalty import SmoothPenaltyParams
from stochga.planner import (
    PathEnvironment,
    fit_corridor,
    objective_parts,
    objective_Q,
    path_plan_payload,
    plan_path,
)
from stochga.splines import Trajectory, build_basis
from stochga.stats import norm_cdf, norm_quantile

PARAMS = SmoothPenaltyParams(max_penalty=50.0, alpha=0.01, target=0.05, steepness=200.0)


def circle(center, radius):
    return ConfidenceEllipse(center=center, shape=np.eye(2), threshold=radius**2)


def bare_env(ellipses=(), corridor=None, r=4.0, n_graph=400):
    return PathEnvironment(
        basis=build_basis(150.0, 3),
        ellipses=tuple(ellipses),
        corridor=corridor,
        clearance_radius=r,
        n_graph=n_graph,
    )


class TestFitCorridor:
    def test_noiseless_linear_boundaries_recovered(self):
        xs = np.linspace(0.0, 30.0, 30)
        corridor = fit_corridor((xs, 20.0 + xs), (xs, -20.0 + xs), kind="linear")
        grid = np.linspace(0.0, 30.0, 7)
        assert np.max(np.abs(corridor.upper.predict(grid) - (20.0 + grid))) < 1e-8
        assert np.max(np.abs(corridor.lower.predict(grid) - (grid - 20.0))) < 1e-8

    def test_orientation_fixed_from_data(self):
        xs = np.linspace(0.0, 30.0, 30)
        # Boundaries supplied swapped; the corridor must reorder them.
        corridor = fit_corridor((xs, -20.0 + xs), (xs, 20.0 + xs), kind="linear")
        assert corridor.upper.predict(15.0) > corridor.lower.predict(15.0)

    def test_local_quadratic_exact_on_quadratics(self):
        rng = np.random.default_rng(0)
        xs = rng.uniform(0, 150, 120)
        upper = 30.0 + 0.1 * xs - 0.002 * xs**2
        lower = upper - 25.0
        corridor = fit_corridor((xs, upper), (xs, lower), kind="local_quadratic", bandwidth=12.0)
        grid = np.linspace(5, 145, 15)
        assert np.max(np.abs(corridor.upper.predict(grid) - (30.0 + 0.1 * grid - 0.002 * grid**2))) < 1e-8

    def test_sine_corridor_fit_error_bounded(self):
        # Monte Carlo against the generating curve on [10, 140].
        rng = np.random.default_rng(1)
        grid = np.linspace(10.0, 140.0, 131)
        truth = 20.0 + 30.0 * np.sin(grid / 45.0)
        max_errors = []
        for _ in range(10):
            xs = rng.uniform(0, 150, 300)
            upper = 20.0 + 30.0 * np.sin(xs / 45.0) + rng.standard_normal(300)
            lower = -20.0 + 30.0 * np.sin(xs / 45.0) + rng.standard_normal(300)
            corridor = fit_corridor((xs, upper), (xs, lower), kind="local_quadratic")
            max_errors.append(float(np.max(np.abs(corridor.upper.predict(grid) - truth))))
        assert float(np.mean(max_errors)) < 3.0

    def test_crossing_boundaries_rejected(self):
        xs = np.linspace(0.0, 30.0, 30)
        with pytest.raises(ValueError, match="degenerate corridor"):
            fit_corridor((xs, xs - 15.0), (xs, 15.0 - xs), kind="linear")

    def test_piecewise_segments_dispatch(self):
        seg1 = (np.linspace(0, 30, 30), 20.0 + np.linspace(0, 30, 30))
        seg2 = (np.linspace(30, 100, 40), 80.0 - np.linspace(30, 100, 40))
        lower1 = (seg1[0], seg1[1] - 40.0)
        lower2 = (seg2[0], seg2[1] - 40.0)
        corridor = fit_corridor([seg1, seg2], [lower1, lower2], kind="linear")
        assert corridor.upper.predict(10.0) == pytest.approx(30.0, abs=1e-8)
        assert corridor.upper.predict(60.0) == pytest.approx(20.0, abs=1e-8)


class TestObjective:
    def test_unconstrained_flat_path(self):
        env = bare_env()
        assert objective_Q(np.zeros(3), env, PARAMS) == pytest.approx(150.0, abs=1e-9)

    def test_touching_ellipse_pays_full_penalty(self):
        env = bare_env(ellipses=[circle([75.0, 0.0], 2.0)])
        parts = objective_parts(np.zeros(3), env, PARAMS)
        assert parts["obstacle_distance"] == 0.0
        assert parts["obstacle_penalty"] == pytest.approx(50.0, abs=1e-6)

    def test_clearance_equal_to_radius_pays_alpha_fraction(self):
        # Flat path vs circle center (75, R + 4): distance is exactly r = 4,
        # so the ramp argument is the alpha quantile and the penalty 50*0.01.
        # 401 graph samples put t = 75 exactly on the grid.
        env = bare_env(ellipses=[circle([75.0, 6.0], 2.0)], n_graph=401)
        parts = objective_parts(np.zeros(3), env, PARAMS)
        assert parts["obstacle_distance"] == pytest.approx(4.0, abs=1e-9)
        assert parts["obstacle_penalty"] == pytest.approx(50.0 * 0.01, rel=1e-6)

    def test_objective_dominates_length_and_bounds(self):
        rng = np.random.default_rng(2)
        env = bare_env(
            ellipses=[circle([60.0, 8.0], 3.0), circle([100.0, -10.0], 5.0)],
        )
        for _ in range(25):
            theta = rng.uniform(-80, 80, 3)
            parts = objective_parts(theta, env, PARAMS)
            assert parts["total"] >= parts["length"] >= 150.0 - 1e-9
            assert 0.0 <= parts["obstacle_penalty"] <= PARAMS.max_penalty
            assert 0.0 <= parts["corridor_penalty"] <= PARAMS.max_penalty

    def test_growing_ellipses_never_reduce_objective(self):
        base = circle([70.0, 5.0], 3.0)
        theta = np.array([10.0, -5.0, 8.0])
        values = []
        for scale in (1.0, 1.5, 2.0, 3.0):
            env = bare_env(
                ellipses=[
                    ConfidenceEllipse(
                        center=base.center, shape=base.shape, threshold=base.threshold * scale
                    )
                ]
            )
            values.append(objective_Q(theta, env, PARAMS))
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))

    def test_matches_standalone_pieces(self):
        # The assembled objective must equal arc_length + penalties computed
        # from the public pieces.
        from stochga.splines import arc_length

        env = bare_env(ellipses=[circle([40.0, 6.0], 2.5)])
        theta = np.array([12.0, -20.0, 5.0])
        traj = Trajectory(basis=env.basis, theta=theta)
        d = dist_graph_to_set(traj, env.ellipses)
        expected = arc_length(traj) + 50.0 * norm_cdf(
            norm_quantile(0.01) + math.sqrt(200.0) * (4.0 - d)
        )
        assert objective_Q(theta, env, PARAMS) == pytest.approx(expected, rel=1e-12)

    def test_corridor_gamma_zero_outside(self):
        xs = np.linspace(0.0, 150.0, 60)
        corridor = fit_corridor((xs, np.full(60, 30.0)), (xs, np.full(60, 10.0)), kind="linear")
        env = bare_env(corridor=corridor)
        parts = objective_parts(np.zeros(3), env, PARAMS)  # flat path below corridor
        assert parts["corridor_gamma"] == 0.0
        expected = 50.0 * norm_cdf(norm_quantile(0.01) + math.sqrt(200.0) * 0.05)
        assert parts["corridor_penalty"] == pytest.approx(expected, rel=1e-9)


class TestPlanPath:
    def test_empty_field_recovers_straight_line(self):
        env = bare_env()
        plan = plan_path(env, PARAMS, GaConfig(30, 40, 0.9, 0.075, 2, seed=0))
        assert plan.parts["length"] <= 150.05
        assert plan.parts["total"] <= 150.05

    def test_same_seed_identical_plan(self):
        env = bare_env(ellipses=[circle([75.0, 2.0], 3.0)])
        cfg = GaConfig(25, 30, 0.9, 0.075, 2, seed=5)
        a = plan_path(env, PARAMS, cfg)
        b = plan_path(env, PARAMS, cfg)
        assert np.array_equal(a.trajectory.theta, b.trajectory.theta)
        assert a.best_q == b.best_q

    def test_single_obstacle_yields_clearance(self):
        # Obstacle astride the segment: at least 8 of 10 desk-scale runs must
        # keep the best path at >= 95% of the clearance radius.
        env = bare_env(ellipses=[circle([75.0, 0.0], 3.0)])
        hits = 0
        for seed in range(10):
            plan = plan_path(env, PARAMS, GaConfig(30, 50, 0.9, 0.075, 2, seed=seed))
            traj = plan.trajectory
            if dist_graph_to_set(traj, env.ellipses) >= 4.0 * 0.95:
                hits += 1
        assert hits >= 8

    def test_payload_structure(self):
        xs = np.linspace(0.0, 150.0, 60)
        corridor = fit_corridor((xs, np.full(60, 30.0)), (xs, np.full(60, -30.0)), kind="linear")
        env = bare_env(ellipses=[circle([75.0, 4.0], 2.0)], corridor=corridor)
        plan = plan_path(env, PARAMS, GaConfig(20, 10, 0.9, 0.075, 2, seed=1))
        payload = path_plan_payload(plan, env)
        assert len(payload["samples"]["t"]) == 400
        assert len(payload["samples"]["f"]) == 400
        assert len(payload["ellipses"]) == 1
        assert set(payload["ellipses"][0]) == {"center", "semi_axes", "rotation", "threshold"}
        assert len(payload["corridor"]["upper"]) == 400
