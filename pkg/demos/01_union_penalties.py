"""Penalty calculus walkthrough: crisp sums, unions of regions, smooth ramps.

The feasible set here is a union of two intervals on the line, [-4, -2] and
[1, 3].  A plain sum of violations would charge points that are perfectly
feasible in one of the two intervals; the union penalties charge nothing as
soon as any single group of constraints is satisfied.  The smooth penalty
then replaces crisp violations with a probability ramp, which is what lets a
genetic algorithm live near uncertain borders.

Run:  python3 demos/01_union_penalties.py
"""

import numpy as np

from stochga import (
    InequalityGroup,
    SmoothPenaltyParams,
    smooth_gamma_penalty,
    union_indicator_penalty,
    union_min_penalty,
)

# Two intervals as constraint groups: x in [-4, -2]  or  x in [1, 3].
left = InequalityGroup(
    constraints=(lambda x: -4.0 - x, lambda x: x - (-2.0)),
    weights=(1.0, 1.0),
)
right = InequalityGroup(
    constraints=(lambda x: 1.0 - x, lambda x: x - 3.0),
    weights=(1.0, 1.0),
)
groups = [left, right]

print("union penalties on the line, feasible set [-4,-2] U [1,3]")
print(f"{'x':>6}  {'min-form':>9}  {'indicator-form':>14}")
for x in (-5.0, -3.0, -1.0, 0.0, 2.0, 4.0):
    print(
        f"{x:6.1f}  {union_min_penalty(x, groups):9.3f}  "
        f"{union_indicator_penalty(x, groups):14.3f}"
    )
print("note: zero exactly when either interval accepts the point;")
print("the min form charges the cheaper group, the indicator form the full sum.\n")

# The smooth ramp: feasibility degrades from certain (1) to hopeless (0).
params = SmoothPenaltyParams(max_penalty=7200.0, alpha=0.05, target=0.05, steepness=10000.0)
print("smooth probability penalty, ceiling 7200, ramp centered at gamma = 0.05")
print(f"{'gamma':>6}  {'penalty':>10}")
for gamma in (1.0, 0.5, 0.2, 0.08, 0.05, 0.02, 0.0):
    print(f"{gamma:6.2f}  {smooth_gamma_penalty([gamma], params):10.3f}")
print("at gamma = target the penalty equals ceiling * alpha =", 7200 * 0.05)

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 3.5))
    xs = np.linspace(-6, 5, 600)
    ax1.plot(xs, [union_min_penalty(x, groups) for x in xs], label="min form")
    ax1.plot(xs, [union_indicator_penalty(x, groups) for x in xs], "--", label="indicator form")
    ax1.set_xlabel("x")
    ax1.set_ylabel("penalty")
    ax1.set_title("union-of-intervals penalties")
    ax1.legend()

    gammas = np.linspace(0, 1, 400)
    ax2.plot(gammas, [smooth_gamma_penalty([g], params) for g in gammas])
    ax2.axvline(params.target, color="gray", ls=":", label="target level")
    ax2.set_xlabel("feasibility probability")
    ax2.set_ylabel("penalty")
    ax2.set_title("smooth probability ramp")
    ax2.legend()
    fig.tight_layout()
    fig.savefig("demos/01_union_penalties.png", dpi=120)
    print("\nwrote demos/01_union_penalties.png")
except ImportError:
    print("\nmatplotlib not available; skipped the plot")
