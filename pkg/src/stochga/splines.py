"""Clamped cubic B-spline trajectories with pinned endpoints.

A trajectory joins (0, 0) to (b, 0); the clamped basis interpolates its end
coefficients, so pinning is structural: the first and last coefficients are
fixed at zero and only the interior ones are optimized.  Evaluation and
differentiation go through scipy's de Boor implementation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import BSpline

__all__ = [
    "BSplineBasis",
    "Trajectory",
    "build_basis",
    "eval_traj",
    "deriv_traj",
    "arc_length",
]

_DEGREE = 3


@dataclass(frozen=True)
class BSplineBasis:
    """Clamped cubic basis on [0, b] with uniformly spaced interior knots."""

    knots: np.ndarray

    def __post_init__(self):
        knots = np.asarray(self.knots, dtype=float)
        if knots.size < 2 * (_DEGREE + 1) or np.any(np.diff(knots) < 0.0):
            raise ValueError("knot vector must be nondecreasing with clamped ends")
        object.__setattr__(self, "knots", knots)

    @property
    def degree(self) -> int:
        return _DEGREE

    @property
    def n_basis(self) -> int:
        return self.knots.size - _DEGREE - 1

    @property
    def n_free(self) -> int:
        """Interior coefficients left free once both endpoint coefficients are pinned."""
        return self.n_basis - 2

    @property
    def span(self):
        return float(self.knots[0]), float(self.knots[-1])

    @property
    def interior_knots(self) -> np.ndarray:
        return self.knots[_DEGREE + 1 : -(_DEGREE + 1)]

    def design_matrix(self, ts) -> np.ndarray:
        """Basis values, one row per abscissa and one column per basis function."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        return BSpline.design_matrix(ts, self.knots, _DEGREE).toarray()

    def derivative_design_matrix(self, ts) -> np.ndarray:
        """First-derivative basis values on the same layout as design_matrix."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        columns = []
        for j in range(self.n_basis):
            unit = np.zeros(self.n_basis)
            unit[j] = 1.0
            columns.append(BSpline(self.knots, unit, _DEGREE).derivative()(ts))
        return np.column_stack(columns)


def build_basis(b: float, n_free: int) -> BSplineBasis:
    """Clamped cubic basis on [0, b] with ``n_free`` interior coefficients.

    The basis has n_free + 2 functions in total; interior knots are spaced
    uniformly (a clamped cubic with k basis functions carries k - 4 of them).
    A clamped cubic needs at least four basis functions, hence n_free >= 2.
    """
    if b <= 0.0:
        raise ValueError("the span b must be positive")
    if n_free < 2:
        raise ValueError(
            "need at least two free coefficients: a clamped cubic basis has a "
            "minimum of four functions and the two endpoint coefficients are pinned"
        )
    n_basis = n_free + 2
    interior = np.linspace(0.0, b, n_basis - 2)[1:-1]
    knots = np.concatenate([np.zeros(_DEGREE + 1), interior, np.full(_DEGREE + 1, b)])
    return BSplineBasis(knots=knots)


@dataclass(frozen=True)
class Trajectory:
    """Spline path with endpoints pinned to zero; theta holds the free coefficients."""

    basis: BSplineBasis
    theta: np.ndarray

    def __post_init__(self):
        theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        if theta.size != self.basis.n_free:
            raise ValueError(
                f"expected {self.basis.n_free} free coefficients, got {theta.size}"
            )
        object.__setattr__(self, "theta", theta)

    @cached_property
    def full_coefficients(self) -> np.ndarray:
        return np.concatenate([[0.0], self.theta, [0.0]])

    @cached_property
    def _spline(self) -> BSpline:
        return BSpline(self.basis.knots, self.full_coefficients, _DEGREE)

    @cached_property
    def _derivative(self) -> BSpline:
        return self._spline.derivative()


def _check_domain(traj: Trajectory, ts):
    start, stop = traj.basis.span
    if np.any(ts < start) or np.any(ts > stop):
        raise ValueError(f"abscissa outside the trajectory domain [{start}, {stop}]")


def eval_traj(traj: Trajectory, t):
    """Trajectory value f(t); exact zero at both endpoints."""
    ts = np.asarray(t, dtype=float)
    _check_domain(traj, ts)
    out = traj._spline(ts)
    return float(out) if out.ndim == 0 else out


def deriv_traj(traj: Trajectory, t):
    """First derivative f'(t)."""
    ts = np.asarray(t, dtype=float)
    _check_domain(traj, ts)
    out = traj._derivative(ts)
    return float(out) if out.ndim == 0 else out


def simpson_weights(start: float, stop: float, panels: int):
    """Nodes and weights of the composite Simpson rule with ``panels`` panels."""
    if panels < 2 or panels % 2:
        raise ValueError("Simpson quadrature needs an even, positive panel count")
    ts = np.linspace(start, stop, panels + 1)
    w = np.ones(panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w *= (stop - start) / panels / 3.0
    return ts, w


def arc_length(traj: Trajectory, panels: int = 200) -> float:
    """Graph length of the trajectory by composite Simpson quadrature."""
    start, stop = traj.basis.span
    ts, w = simpson_weights(start, stop, panels)
    slope = deriv_traj(traj, ts)
    return float(w @ np.sqrt(1.0 + slope * slope))
