"""Data-driven estimators of the probability that a point is feasible.

Three families, matching how the feasible set was observed:

* Gaussian clouds — the region is a disc of known radius around an unknown
  center observed through noisy readings; :func:`gamma_circle` converts the
  distance to the confidence ellipse of the center into a probability.
* Linear boundary — the region is one side of a line observed with noise;
  :func:`gamma_linreg` uses the regression t band (two-sided tail, like a
  p-value).
* Nonparametric boundary — one side of an unknown smooth curve;
  :func:`gamma_nw` uses the Nadaraya-Watson estimate with its asymptotic
  normal band.  A locally weighted quadratic variant is provided for corridor
  boundaries where the extra degree keeps bias in check.

Every evaluator returns values in [0, 1], equals 1 on the feasible side of
the fitted boundary, and decays continuously with distance past it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .geometry import ConfidenceEllipse, dist_point_ellipse
from .stats import chisq2_cdf, chisq2_quantile, norm_cdf, t_cdf

__all__ = [
    "GAUSS_KERNEL_L2SQ",
    "BELOW_IS_FEASIBLE",
    "ABOVE_IS_FEASIBLE",
    "SampleCloud",
    "GaussianCloudFit",
    "LinearRegressionFit",
    "NadarayaWatsonFit",
    "LocalQuadraticFit",
    "fit_gaussian_cloud",
    "gamma_circle",
    "fit_linear_regression",
    "gamma_linreg",
    "fit_nadaraya_watson",
    "gamma_nw",
    "fit_local_quadratic",
    "silverman_bandwidth",
]

# Squared L2 norm of the standard Gaussian kernel, integral of K^2.
GAUSS_KERNEL_L2SQ = 1.0 / (2.0 * math.sqrt(math.pi))

BELOW_IS_FEASIBLE = "below_is_feasible"
ABOVE_IS_FEASIBLE = "above_is_feasible"
_SIDES = (BELOW_IS_FEASIBLE, ABOVE_IS_FEASIBLE)


@dataclass(frozen=True)
class SampleCloud:
    """Noisy 2-D observations of one feasibility region."""

    points: np.ndarray

    def __post_init__(self):
        points = np.atleast_2d(np.asarray(self.points, dtype=float))
        if points.ndim != 2 or points.shape[1] != 2:
            raise ValueError("a sample cloud is an (n, 2) array of observations")
        object.__setattr__(self, "points", points)

    @property
    def n(self) -> int:
        return self.points.shape[0]


def _cloud_points(cloud):
    if isinstance(cloud, SampleCloud):
        return cloud.points
    return SampleCloud(cloud).points


@dataclass(frozen=True)
class GaussianCloudFit:
    mean: np.ndarray
    covariance: np.ndarray
    n: int
    covariance_known: bool


def fit_gaussian_cloud(cloud, known_covariance=None) -> GaussianCloudFit:
    """Sample mean plus either the supplied or the unbiased sample covariance."""
    points = _cloud_points(cloud)
    n = points.shape[0]
    if n < 2:
        raise ValueError("need at least two observations")
    mean = points.mean(axis=0)
    if known_covariance is not None:
        covariance = np.asarray(known_covariance, dtype=float).reshape(2, 2)
        if np.linalg.det(covariance) <= 0.0:
            raise ValueError("known covariance must be positive definite")
        return GaussianCloudFit(mean=mean, covariance=covariance, n=n, covariance_known=True)
    if n < 3:
        raise ValueError("need at least three observations to estimate a covariance")
    covariance = np.cov(points.T, ddof=1)
    if np.linalg.det(covariance) <= 1e-12 * max(1.0, covariance.trace() ** 2):
        raise ValueError(
            "sample covariance is singular; pass known_covariance for a degenerate cloud"
        )
    return GaussianCloudFit(mean=mean, covariance=covariance, n=n, covariance_known=False)


def _spherical_sd(covariance) -> float | None:
    scale = max(covariance[0, 0], covariance[1, 1])
    if (
        abs(covariance[0, 1]) <= 1e-12 * scale
        and abs(covariance[0, 0] - covariance[1, 1]) <= 1e-12 * scale
    ):
        return math.sqrt(covariance[0, 0])
    return None


def _center_ellipse(fit: GaussianCloudFit, gamma: float) -> ConfidenceEllipse:
    # chisq2_quantile(1 - gamma) == -2 ln(gamma); the direct form stays exact
    # for tail levels far below floating-point resolution of 1 - gamma.
    return ConfidenceEllipse(
        center=fit.mean,
        shape=fit.n * np.linalg.inv(fit.covariance),
        threshold=-2.0 * math.log(gamma),
    )


def gamma_circle(x, fit: GaussianCloudFit, r: float) -> float:
    """Probability that ``x`` lies in a disc of radius ``r`` around the cloud's center.

    Equal to 1 within distance r of the sample mean; beyond that, the tail
    level of the confidence ellipse whose distance to ``x`` equals r.  For a
    spherical covariance the level has a closed form; otherwise it is found
    by bisection on the monotone map gamma -> distance(x, ellipse(gamma)).
    """
    if r <= 0.0:
        raise ValueError("region radius must be positive")
    x = np.asarray(x, dtype=float).reshape(2)
    gap = float(np.linalg.norm(x - fit.mean)) - r
    if gap <= 0.0:
        return 1.0
    sd = _spherical_sd(fit.covariance)
    if sd is not None:
        # Spherical ellipse is a circle of radius sd*sqrt(threshold/n); solving
        # distance == r for the threshold gives the closed form below, which
        # matches the bisection path to well below its tolerance.
        return 1.0 - chisq2_cdf(fit.n * gap * gap / (sd * sd))
    return _gamma_circle_bisect(x, fit, r)


def _gamma_circle_bisect(x, fit: GaussianCloudFit, r: float, tol: float = 1e-6) -> float:
    lo, hi = 1e-300, 1.0  # distance(ellipse(gamma)) - r is increasing in gamma
    if dist_point_ellipse(x, _center_ellipse(fit, lo)) - r > 0.0:
        return 0.0  # even the widest bracket ellipse cannot reach x
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if dist_point_ellipse(x, _center_ellipse(fit, mid)) - r > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def band_gamma_values(excess, se, df):
    """Vectorized two-sided band probability; 1 on the feasible side.

    ``excess`` is the (vertical) overshoot past the fitted boundary, positive
    on the infeasible side.  ``df`` entries of 0 select the normal band,
    positive entries the t band.  Zero standard errors make the boundary
    deterministic: probability drops to 0 on the infeasible side.
    """
    from scipy import special

    excess = np.asarray(excess, dtype=float)
    se = np.broadcast_to(np.asarray(se, dtype=float), excess.shape)
    df = np.broadcast_to(np.asarray(df), excess.shape)
    gammas = np.ones_like(excess)
    infeasible = excess > 0.0
    if not np.any(infeasible):
        return gammas
    exc = excess[infeasible]
    ses = se[infeasible]
    dfs = df[infeasible]
    out = np.zeros_like(exc)
    ok = ses > 0.0
    if np.any(ok):
        t = exc[ok] / ses[ok]
        d = dfs[ok]
        normal = d == 0
        vals = np.empty_like(t)
        if np.any(normal):
            vals[normal] = 2.0 * special.ndtr(-t[normal])
        if np.any(~normal):
            dd = d[~normal].astype(float)
            tail = 0.5 * special.betainc(0.5 * dd, 0.5, dd / (dd + t[~normal] ** 2))
            vals[~normal] = 2.0 * tail
        out[ok] = vals
    gammas[infeasible] = out
    return gammas


def _band_gamma_t(excess: float, se: float, df: int) -> float:
    if excess <= 0.0:
        return 1.0
    if se <= 0.0:
        return 0.0  # deterministic boundary: off the line on the infeasible side
    return 2.0 * (1.0 - t_cdf(excess / se, df))


def _band_gamma_normal(excess: float, se: float) -> float:
    if excess <= 0.0:
        return 1.0
    if se <= 0.0:
        return 0.0
    return 2.0 * (1.0 - norm_cdf(excess / se))


def _boundary_excess(x, predicted: float, feasible_side: str) -> float:
    """How far (vertically) x sits on the infeasible side of a fitted boundary."""
    if feasible_side not in _SIDES:
        raise ValueError(f"feasible_side must be one of {_SIDES}")
    x2 = float(x[1])
    if feasible_side == ABOVE_IS_FEASIBLE:
        return predicted - x2
    return x2 - predicted


@dataclass(frozen=True)
class LinearRegressionFit:
    """Ordinary least squares fit of a linear boundary, with its t-band pieces."""

    intercept: float
    slope: float
    sigma2: float  # residual variance, RSS / (n - 2)
    x_mean: float
    sxx: float  # predictor sum of squares around its mean
    n: int

    kind = "linear"

    @property
    def df(self) -> int:
        return self.n - 2

    def predict(self, x0):
        return self.intercept + self.slope * np.asarray(x0, dtype=float)

    def band_se(self, x0):
        x0 = np.asarray(x0, dtype=float)
        return np.sqrt(self.sigma2 * (1.0 / self.n + (x0 - self.x_mean) ** 2 / self.sxx))


def fit_linear_regression(xs, ys) -> LinearRegressionFit:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape:
        raise ValueError("xs and ys must be 1-D arrays of equal length")
    n = xs.size
    if n < 3:
        raise ValueError("need at least three observations")
    x_mean = xs.mean()
    sxx = float(((xs - x_mean) ** 2).sum())
    if sxx <= 1e-12 * max(1.0, x_mean * x_mean) * n:
        raise ValueError("predictor is constant; the boundary line is not identifiable")
    slope = float(((xs - x_mean) * (ys - ys.mean())).sum() / sxx)
    intercept = float(ys.mean() - slope * x_mean)
    residuals = ys - (intercept + slope * xs)
    sigma2 = max(0.0, float((residuals**2).sum() / (n - 2)))
    # Exactly interpolated data leaves rounding residue in sigma2; snap it to
    # zero so the boundary is treated as deterministic, not as noise-level fuzz.
    if sigma2 < (1e-10 * max(1.0, float(np.abs(ys).max()))) ** 2:
        sigma2 = 0.0
    return LinearRegressionFit(
        intercept=intercept, slope=slope, sigma2=sigma2, x_mean=float(x_mean), sxx=sxx, n=n
    )


def gamma_linreg(x, fit: LinearRegressionFit, feasible_side: str) -> float:
    """Two-sided t-band feasibility probability for a linear boundary.

    1 on the feasible side of the fitted line; otherwise 2*(1 - T_df(|t|))
    with t the vertical excess over the mean-response standard error.
    """
    x = np.asarray(x, dtype=float).reshape(2)
    excess = _boundary_excess(x, float(fit.predict(x[0])), feasible_side)
    return _band_gamma_t(excess, float(fit.band_se(x[0])), fit.df)


def _snap_residuals(residuals, ys) -> np.ndarray:
    """Squared residuals, zeroed when they are pure floating-point residue."""
    sq = residuals**2
    if sq.max() < (1e-10 * max(1.0, float(np.abs(ys).max()))) ** 2:
        return np.zeros_like(sq)
    return sq


def silverman_bandwidth(xs) -> float:
    """Silverman's normal-reference rule on the predictor sample."""
    xs = np.asarray(xs, dtype=float)
    spread_sd = float(xs.std(ddof=1))
    q75, q25 = np.percentile(xs, [75.0, 25.0])
    spread_iqr = float(q75 - q25) / 1.34
    candidates = [s for s in (spread_sd, spread_iqr) if s > 0.0]
    if not candidates:
        raise ValueError("predictor sample is degenerate; supply an explicit bandwidth")
    return 0.9 * min(candidates) * xs.size ** (-0.2)


class _KernelBandMixin:
    """Shared Gaussian-kernel machinery: weights, density, plug-in band."""

    def _weights(self, x0):
        u = (np.asarray(x0, dtype=float)[..., None] - self.x) / self.bandwidth
        return np.exp(-0.5 * u * u)

    @staticmethod
    def _check_support(total):
        if np.any(total < 1e-12):
            raise ValueError("evaluation point outside data support")

    @property
    def n(self) -> int:
        return self.x.size

    def predict(self, x0):
        weights = self._weights(x0)
        total = weights.sum(axis=-1)
        self._check_support(total)
        out = self._local_estimate(weights, total, x0)
        return float(out) if out.ndim == 0 else out

    def density(self, x0):
        """Kernel density estimate of the predictor at x0 (same kernel and bandwidth)."""
        weights = self._weights(x0)
        out = weights.sum(axis=-1) / (self.n * self.bandwidth * math.sqrt(2.0 * math.pi))
        return float(out) if out.ndim == 0 else out

    def band(self, x0) -> Tuple[np.ndarray, np.ndarray]:
        """Fitted value and plug-in standard error of the boundary estimate at x0."""
        weights = self._weights(x0)
        total = weights.sum(axis=-1)
        self._check_support(total)
        predicted = self._local_estimate(weights, total, x0)
        local_var = weights @ self.residual_sq / total
        density = total / (self.n * self.bandwidth * math.sqrt(2.0 * math.pi))
        se = np.sqrt(
            GAUSS_KERNEL_L2SQ * local_var / (self.n * self.bandwidth * density)
        )
        return predicted, se

    def band_se(self, x0):
        out = self.band(x0)[1]
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class NadarayaWatsonFit(_KernelBandMixin):
    """Kernel-weighted local average of the boundary observations."""

    x: np.ndarray
    y: np.ndarray
    bandwidth: float
    residual_sq: np.ndarray  # squared in-sample residuals, for the variance plug-in

    kind = "kernel"
    kernel_l2sq = GAUSS_KERNEL_L2SQ

    def _local_estimate(self, weights, total, x0):
        return weights @ self.y / total


def fit_nadaraya_watson(xs, ys, bandwidth="auto") -> NadarayaWatsonFit:
    """Gaussian-kernel Nadaraya-Watson regression of ys on xs.

    ``bandwidth`` may be a positive number or "auto" (Silverman's rule on the
    predictor).  Squared residuals are stored so the asymptotic band can use a
    locally smoothed variance estimate.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape:
        raise ValueError("xs and ys must be 1-D arrays of equal length")
    if xs.size < 10:
        raise ValueError("need at least ten observations for a kernel fit")
    h = silverman_bandwidth(xs) if bandwidth == "auto" else float(bandwidth)
    if h <= 0.0:
        raise ValueError("bandwidth must be positive")
    u = (xs[:, None] - xs[None, :]) / h
    weights = np.exp(-0.5 * u * u)
    fitted = weights @ ys / weights.sum(axis=1)
    return NadarayaWatsonFit(
        x=xs, y=ys, bandwidth=h, residual_sq=_snap_residuals(ys - fitted, ys)
    )


def gamma_nw(x, fit: NadarayaWatsonFit, feasible_side: str) -> float:
    """Normal-band feasibility probability for a kernel-regression boundary.

    1 on the feasible side of the fitted curve; otherwise 2*(1 - Phi(|z|))
    with z the vertical excess over the kernel plug-in standard error.
    Raises for points outside the data support.
    """
    x = np.asarray(x, dtype=float).reshape(2)
    predicted, se = fit.band(x[0])
    excess = _boundary_excess(x, float(predicted), feasible_side)
    return _band_gamma_normal(excess, float(se))


@dataclass(frozen=True)
class LocalQuadraticFit(_KernelBandMixin):
    """Locally weighted quadratic least squares (Gaussian weights).

    The local design is expressed in (x - x0)/h so the moment matrices stay
    well conditioned; the band uses the same kernel plug-in as the
    Nadaraya-Watson estimator.
    """

    x: np.ndarray
    y: np.ndarray
    bandwidth: float
    residual_sq: np.ndarray

    kind = "local_quadratic"
    kernel_l2sq = GAUSS_KERNEL_L2SQ

    def _local_estimate(self, weights, total, x0):
        z = (np.asarray(x0, dtype=float)[..., None] - self.x) / self.bandwidth
        s0 = total
        s1 = (weights * z).sum(axis=-1)
        s2 = (weights * z * z).sum(axis=-1)
        s3 = (weights * z**3).sum(axis=-1)
        s4 = (weights * z**4).sum(axis=-1)
        t0 = weights @ self.y
        t1 = (weights * z) @ self.y
        t2 = (weights * z * z) @ self.y
        moments = np.stack(
            [
                np.stack([s0, s1, s2], axis=-1),
                np.stack([s1, s2, s3], axis=-1),
                np.stack([s2, s3, s4], axis=-1),
            ],
            axis=-2,
        )
        rhs = np.stack([t0, t1, t2], axis=-1)
        beta = np.linalg.solve(moments, rhs[..., None])[..., 0]
        return beta[..., 0]


def fit_local_quadratic(xs, ys, bandwidth="auto") -> LocalQuadraticFit:
    """Local quadratic regression of ys on xs with Gaussian weights."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape:
        raise ValueError("xs and ys must be 1-D arrays of equal length")
    if xs.size < 10:
        raise ValueError("need at least ten observations for a local fit")
    h = silverman_bandwidth(xs) if bandwidth == "auto" else float(bandwidth)
    if h <= 0.0:
        raise ValueError("bandwidth must be positive")
    fit = LocalQuadraticFit(x=xs, y=ys, bandwidth=h, residual_sq=np.zeros_like(ys))
    fitted = fit.predict(xs)
    return LocalQuadraticFit(
        x=xs, y=ys, bandwidth=h, residual_sq=_snap_residuals(ys - fitted, ys)
    )
