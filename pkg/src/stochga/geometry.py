"""Confidence ellipses around observed point clouds, and distances to them.

An ellipse is stored as {y : (y - center)^T shape (y - center) <= threshold}
with ``shape`` symmetric positive definite.  For a cloud of n readings with
known observation covariance S the natural choice is shape = n * S^-1 and
threshold the chi-square(2) quantile of the wanted confidence level, which
makes the region shrink like 1/sqrt(n) per axis as readings accumulate.

Point-to-ellipse distance runs a vectorized Newton iteration on the
projection equation in the principal frame, with a dense boundary-sampling
fallback for points the iteration fails to converge on (not observed in
practice, kept as a safety net).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .stats import chisq2_quantile

__all__ = [
    "ConfidenceEllipse",
    "ellipse_from_readings",
    "dist_point_ellipse",
    "dist_points_to_ellipse",
    "dist_graph_to_set",
]

_FALLBACK_BOUNDARY_POINTS = 4096


@dataclass(frozen=True)
class ConfidenceEllipse:
    center: np.ndarray
    shape: np.ndarray  # SPD quadratic-form matrix
    threshold: float

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float).reshape(2)
        shape = np.asarray(self.shape, dtype=float).reshape(2, 2)
        if not np.allclose(shape, shape.T, rtol=1e-10, atol=1e-12):
            raise ValueError("shape matrix must be symmetric")
        if np.linalg.eigvalsh(shape)[0] <= 0.0:
            raise ValueError("shape matrix must be positive definite")
        if self.threshold < 0.0:
            raise ValueError("threshold must be nonnegative")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "threshold", float(self.threshold))

    @cached_property
    def _eig(self):
        eigenvalues, eigenvectors = np.linalg.eigh(self.shape)
        return eigenvalues, eigenvectors

    @cached_property
    def semi_axes(self) -> np.ndarray:
        """Semi-axis lengths, ordered to match the columns of :attr:`axes`."""
        eigenvalues, _ = self._eig
        return np.sqrt(self.threshold / eigenvalues)

    @property
    def axes(self) -> np.ndarray:
        """Principal directions as columns."""
        return self._eig[1]

    @property
    def rotation(self) -> float:
        """Angle (radians) of the first principal axis."""
        v = self.axes[:, 0]
        return math.atan2(v[1], v[0])

    def mahalanobis_sq(self, points):
        diff = np.atleast_2d(np.asarray(points, dtype=float)) - self.center
        return np.einsum("ij,jk,ik->i", diff, self.shape, diff)

    def contains(self, points):
        return self.mahalanobis_sq(points) <= self.threshold * (1.0 + 1e-12)

    def boundary_points(self, count: int) -> np.ndarray:
        angles = np.linspace(0.0, 2.0 * math.pi, count, endpoint=False)
        a, b = self.semi_axes
        local = np.column_stack([a * np.cos(angles), b * np.sin(angles)])
        return self.center + local @ self.axes.T

    def area(self) -> float:
        a, b = self.semi_axes
        return math.pi * a * b


def ellipse_from_readings(points, sigma, gamma) -> ConfidenceEllipse:
    """Confidence ellipse for the true location behind ``n`` noisy readings.

    ``gamma`` is the tail level: the region has confidence 100*(1-gamma)%,
    its boundary satisfying n (mean - y)^T sigma^-1 (mean - y) = chi-square
    quantile of 1-gamma.  As gamma -> 1 the ellipse degenerates to the sample
    mean; quadrupling n halves both semi-axes.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != 2 or points.shape[0] < 1:
        raise ValueError("need at least one 2-D reading")
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie strictly inside (0, 1)")
    sigma = np.asarray(sigma, dtype=float).reshape(2, 2)
    if np.linalg.det(sigma) <= 0.0 or not np.allclose(sigma, sigma.T, rtol=1e-10, atol=1e-12):
        raise ValueError("observation covariance must be symmetric positive definite")
    n = points.shape[0]
    return ConfidenceEllipse(
        center=points.mean(axis=0),
        shape=n * np.linalg.inv(sigma),
        threshold=chisq2_quantile(1.0 - gamma),
    )


def _project_outside(frame_points, semi_axes):
    """Distances from principal-frame points (all strictly outside) to the boundary.

    Solves sum_i (a_i q_i / (a_i^2 + mu))^2 = 1 for mu >= 0 by Newton.  The
    left side is convex and decreasing, so starting anywhere on its
    nonnegative side makes the iteration climb monotonically to the root;
    mu0 = ||(a_i q_i)|| - max(a_i^2) keeps F(mu0) >= 0 while landing within
    one axis length of the root even for far points.
    """
    a_sq = semi_axes**2
    numerator = (semi_axes * frame_points) ** 2  # (m, 2)
    mu = np.maximum(np.sqrt(numerator.sum(axis=1)) - a_sq.max(), 0.0)
    converged = np.zeros(len(frame_points), dtype=bool)
    for _ in range(200):
        denom = a_sq + mu[:, None]
        f = (numerator / denom**2).sum(axis=1) - 1.0
        df = -2.0 * (numerator / denom**3).sum(axis=1)
        step = f / df
        mu = np.maximum(mu - step, 0.0)
        converged = np.abs(f) < 1e-12
        if converged.all():
            break
    closest = a_sq * frame_points / (a_sq + mu[:, None])
    distances = np.linalg.norm(frame_points - closest, axis=1)
    return distances, converged


def dist_points_to_ellipse(points, ellipse: ConfidenceEllipse) -> np.ndarray:
    """Euclidean distances from points to the closed elliptical region (0 inside)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if ellipse.threshold == 0.0:
        return np.linalg.norm(points - ellipse.center, axis=1)
    frame = (points - ellipse.center) @ ellipse.axes
    semi_axes = ellipse.semi_axes
    distances = np.zeros(len(points))
    outside = ((frame / semi_axes) ** 2).sum(axis=1) > 1.0
    if np.any(outside):
        proj, converged = _project_outside(frame[outside], semi_axes)
        if not converged.all():
            boundary = np.column_stack(
                [
                    semi_axes[0] * np.cos(np.linspace(0, 2 * math.pi, _FALLBACK_BOUNDARY_POINTS, endpoint=False)),
                    semi_axes[1] * np.sin(np.linspace(0, 2 * math.pi, _FALLBACK_BOUNDARY_POINTS, endpoint=False)),
                ]
            )
            bad = ~converged
            deltas = frame[outside][bad][:, None, :] - boundary[None, :, :]
            proj[bad] = np.linalg.norm(deltas, axis=2).min(axis=1)
        distances[outside] = proj
    return distances


def dist_point_ellipse(p, ellipse: ConfidenceEllipse) -> float:
    """Distance from a single point to the closed elliptical region."""
    return float(dist_points_to_ellipse(np.asarray(p, dtype=float).reshape(1, 2), ellipse)[0])


def dist_graph_to_set(trajectory, ellipses, n_samples: int = 400) -> float:
    """Minimum distance from a sampled trajectory graph to a union of ellipses.

    Samples the graph {(t, f(t))} at ``n_samples`` uniform abscissae; returns 0
    as soon as any sample lies inside any ellipse.
    """
    from .splines import eval_traj  # local import to keep module layering acyclic

    ellipses = list(ellipses)
    if not ellipses:
        raise ValueError("at least one ellipse is required")
    start, stop = trajectory.basis.span
    ts = np.linspace(start, stop, n_samples)
    pts = np.column_stack([ts, eval_traj(trajectory, ts)])
    return min_distance_to_ellipses(pts, ellipses)


def _min_dist_to_ellipse(points, ellipse: ConfidenceEllipse) -> float:
    """Minimum distance over many points to one ellipse.

    Exact, but prunes with the bounding discs first: the ellipse contains the
    disc of radius min(semi_axes) and sits inside the disc of radius
    max(semi_axes), so only points whose disc-based lower bound undercuts the
    best disc-based upper bound need the Newton projection.
    """
    if ellipse.threshold == 0.0:
        return float(np.linalg.norm(points - ellipse.center, axis=1).min())
    frame = (points - ellipse.center) @ ellipse.axes
    semi_axes = ellipse.semi_axes
    radial = np.linalg.norm(frame, axis=1)
    upper = np.maximum(radial - semi_axes.min(), 0.0).min()
    keep = radial - semi_axes.max() <= upper
    sub = frame[keep]
    inside = ((sub / semi_axes) ** 2).sum(axis=1) <= 1.0
    if np.any(inside):
        return 0.0
    distances, converged = _project_outside(sub, semi_axes)
    if not converged.all():
        return float(dist_points_to_ellipse(points, ellipse).min())
    return float(distances.min())


def min_distance_to_ellipses(points, ellipses) -> float:
    """Minimum distance from any of the points to any of the ellipses."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    best = math.inf
    for ellipse in ellipses:
        best = min(best, _min_dist_to_ellipse(points, ellipse))
        if best == 0.0:
            break
    return best
