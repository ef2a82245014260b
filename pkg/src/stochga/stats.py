"""Normal, chi-square(2) and Student-t distribution helpers.

Feasibility probabilities and penalty values are built directly from these
CDFs, so tail accuracy matters: the normal CDF is erf-based (machine
precision), the t CDF goes through the regularized incomplete beta function,
and the chi-square with two degrees of freedom uses its closed form.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

__all__ = [
    "norm_cdf",
    "norm_pdf",
    "norm_quantile",
    "chisq2_cdf",
    "chisq2_quantile",
    "t_cdf",
]


def _maybe_scalar(out):
    return float(out) if out.ndim == 0 else out


def norm_cdf(z):
    """Standard normal CDF.  Array-friendly; saturates to 0/1 in extreme tails."""
    return _maybe_scalar(special.ndtr(np.asarray(z, dtype=float)))


def norm_pdf(z):
    """Standard normal density."""
    z = np.asarray(z, dtype=float)
    return _maybe_scalar(np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi))


def norm_quantile(p):
    """Inverse of :func:`norm_cdf` on (0, 1).

    Bracketed bisection on the CDF followed by Newton polishing, so the
    inverse is consistent with ``norm_cdf`` to machine precision rather than
    being a second, independently approximated formula.
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile level must lie strictly inside (0, 1), got {p}")
    lo, hi = -40.0, 40.0
    while hi - lo > 1e-8:
        mid = 0.5 * (lo + hi)
        if norm_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    z = 0.5 * (lo + hi)
    for _ in range(8):
        step = (norm_cdf(z) - p) / norm_pdf(z)
        z -= step
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            break
    return z


def chisq2_cdf(x):
    """Chi-square CDF with 2 degrees of freedom: 1 - exp(-x/2)."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise ValueError("chi-square variate must be nonnegative")
    return _maybe_scalar(-np.expm1(-0.5 * x))


def chisq2_quantile(p):
    """Inverse chi-square(2) CDF: -2 ln(1 - p), for p in [0, 1)."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 0.0) or np.any(p >= 1.0):
        raise ValueError("chi-square quantile level must lie in [0, 1)")
    return _maybe_scalar(-2.0 * np.log1p(-p))


def t_cdf(t, df):
    """Student-t CDF with ``df`` degrees of freedom, via the incomplete beta.

    Symmetric by construction: ``t_cdf(-t, df) == 1 - t_cdf(t, df)`` exactly.
    """
    df = int(df)
    if df < 1:
        raise ValueError("degrees of freedom must be a positive integer")
    t = np.asarray(t, dtype=float)
    tail = 0.5 * special.betainc(0.5 * df, 0.5, df / (df + t * t))
    return _maybe_scalar(np.where(t > 0.0, 1.0 - tail, tail))
