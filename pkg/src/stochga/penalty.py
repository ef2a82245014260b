"""Penalty calculus for feasibility regions that are unions of sets.

Three layers, from crisp to probabilistic:

* :func:`crisp_penalty` — classic weighted violation sum for a single set of
  inequality/equality constraints.
* :func:`union_min_penalty` / :func:`union_indicator_penalty` — a candidate
  belongs to a union of regions, so satisfying any one group of constraints
  must cost nothing.  The min form charges the cheapest group, the indicator
  form charges the full sum gated by "every group violated".
* :func:`smooth_gamma_penalty` — when feasibility is only known as a
  probability per region, the penalty is a smooth normal-CDF ramp of the best
  (largest) probability, bounded by a configurable ceiling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence, Tuple

import numpy as np

from .stats import norm_cdf, norm_quantile

__all__ = [
    "InequalityGroup",
    "EqualityGroup",
    "SmoothPenaltyParams",
    "crisp_penalty",
    "union_min_penalty",
    "union_indicator_penalty",
    "smooth_gamma_penalty",
]


@dataclass(frozen=True)
class InequalityGroup:
    """One feasible region {x : g_i(x) <= 0 for all i}, with per-constraint weights."""

    constraints: Tuple[Callable, ...]
    weights: Tuple[float, ...]
    exponent: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if not self.constraints:
            raise ValueError("a constraint group must be nonempty")
        if len(self.constraints) != len(self.weights):
            raise ValueError("one weight per constraint is required")
        if any(w <= 0.0 for w in self.weights):
            raise ValueError("weights must be positive")
        if self.exponent < 1.0:
            raise ValueError("exponent must be at least 1")

    def violation(self, x) -> float:
        """Weighted violation sum; zero iff every constraint is satisfied at x."""
        return float(
            sum(
                w * max(0.0, g(x)) ** self.exponent
                for g, w in zip(self.constraints, self.weights)
            )
        )


@dataclass(frozen=True)
class EqualityGroup:
    """One feasible region {x : h_i(x) = 0 for all i}, with per-constraint weights."""

    constraints: Tuple[Callable, ...]
    weights: Tuple[float, ...]
    exponent: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if not self.constraints:
            raise ValueError("a constraint group must be nonempty")
        if len(self.constraints) != len(self.weights):
            raise ValueError("one weight per constraint is required")
        if any(w <= 0.0 for w in self.weights):
            raise ValueError("weights must be positive")
        if self.exponent < 1.0:
            raise ValueError("exponent must be at least 1")

    def residual(self, x) -> float:
        return float(
            sum(
                w * abs(h(x)) ** self.exponent
                for h, w in zip(self.constraints, self.weights)
            )
        )


@dataclass(frozen=True)
class SmoothPenaltyParams:
    """Tuning of the smooth probability penalty.

    max_penalty: ceiling the penalty saturates to for hopeless candidates.
    alpha: tail level anchoring the ramp (the penalty equals
        max_penalty * alpha when the feasibility probability hits ``target``).
    target: feasibility probability around which the ramp is centered.
    steepness: the ramp argument scales with sqrt(steepness), so larger
        values give a sharper transition from ~0 to ~max_penalty.
    """

    max_penalty: float
    alpha: float
    target: float
    steepness: float

    def __post_init__(self):
        if self.max_penalty <= 0.0:
            raise ValueError("max_penalty must be positive")
        if self.steepness <= 0.0:
            raise ValueError("steepness must be positive")
        if not 0.0 < self.alpha < 1.0 or not 0.0 < self.target < 1.0:
            raise ValueError("alpha and target must lie strictly inside (0, 1)")

    @property
    def anchor(self) -> float:
        """Lower-tail normal quantile at ``alpha`` (negative for alpha < 1/2)."""
        return _alpha_quantile(self.alpha)


@lru_cache(maxsize=128)
def _alpha_quantile(alpha: float) -> float:
    return norm_quantile(alpha)


def crisp_penalty(x, inequality=(), equality=(), ineq_exponent=1.0, eq_exponent=1.0) -> float:
    """sum r*max(0, g(x))**a + sum c*|h(x)|**b over (g, r) and (h, c) pairs.

    Zero exactly when every inequality is satisfied and every equality exact.
    """
    total = 0.0
    for g, weight in inequality:
        total += weight * max(0.0, g(x)) ** ineq_exponent
    for h, weight in equality:
        total += weight * abs(h(x)) ** eq_exponent
    return total


def union_min_penalty(x, ineq_groups: Sequence[InequalityGroup], eq_groups: Sequence[EqualityGroup] = ()) -> float:
    """Cheapest-group penalty: zero iff some inequality group is fully satisfied
    (and, when equality groups are supplied, some equality group is exact)."""
    if not ineq_groups:
        raise ValueError("at least one inequality group is required")
    penalty = min(group.violation(x) for group in ineq_groups)
    if eq_groups:
        penalty += min(group.residual(x) for group in eq_groups)
    return penalty


def union_indicator_penalty(x, ineq_groups: Sequence[InequalityGroup]) -> float:
    """Full violation sum over all groups, gated to zero when any group is satisfied."""
    if not ineq_groups:
        raise ValueError("at least one inequality group is required")
    sums = [group.violation(x) for group in ineq_groups]
    if min(sums) == 0.0:
        return 0.0
    return sum(sums)


def smooth_gamma_penalty(gammas, params: SmoothPenaltyParams) -> float:
    """Smooth penalty of per-region feasibility probabilities.

    Returns min over regions of
    ``max_penalty * Phi(anchor + sqrt(steepness) * (target - gamma))``:
    ~0 for probabilities near 1, ``max_penalty * alpha`` exactly at the
    target, saturating toward ``max_penalty`` as probabilities drop to 0.
    Nonincreasing and continuous in every gamma, always within
    [0, max_penalty].
    """
    gammas = np.atleast_1d(np.asarray(gammas, dtype=float))
    if gammas.size == 0:
        raise ValueError("at least one feasibility probability is required")
    if np.any((gammas < 0.0) | (gammas > 1.0)):
        raise ValueError("feasibility probabilities must lie in [0, 1]")
    ramp = params.anchor + math.sqrt(params.steepness) * (params.target - gammas)
    return float(params.max_penalty * np.min(norm_cdf(ramp)))
