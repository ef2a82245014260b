"""Minimizing the Schwefel double-sum where regressions divide the plane.

The feasible set is the union of two half-regions: above a line observed
through 30 noisy points (estimated by least squares, feasibility via the
regression t band) or below a nonlinear curve observed through 100 noisy
points (estimated by Nadaraya-Watson kernel regression, feasibility via its
asymptotic normal band).  The GA minimizes the objective plus the smooth
penalty of the better band probability.

Run:  python3 demos/03_dividing_plane.py
"""

import numpy as np

from stochga import gen_plane_scenario, run_experiment
from stochga.benchmarks import realize

scenario = gen_plane_scenario(seed=7)
problem = realize(scenario)

print("boundary 1: y = x + 20 observed with sd-5 noise, 30 points (linear fit)")
print("boundary 2: y = x - 30 + 12 sin(x/5) observed with sd-2 noise, 100 points (kernel fit)")
print("feasible: above the line OR below the curve")
print("penalty: ceiling 18000, alpha 0.05, target 0.30, steepness 200\n")

fit = problem.linear_fit
print(f"fitted line      : y = {fit.slope:.4f} x + {fit.intercept:.4f} "
      f"(true slope 1, intercept 20)")
print(f"residual variance: {fit.sigma2:.2f} (true 25)")
print(f"kernel bandwidth : {problem.kernel_fit.bandwidth}")

report = run_experiment(scenario)
x = report.best_candidate
print(f"\nbest candidate    : {np.round(x, 4)}")
print(f"raw Schwefel value: {report.best_objective:.4f}")
print(f"penalty at best   : {report.penalty_at_best:.4f}")
print(f"band probabilities: {np.round(problem.gammas(x), 4)} (line, curve)")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))
    axis = np.linspace(-60, 60, 241)
    surface = problem.objective_grid(axis, axis)
    cf = ax1.contourf(axis, axis, np.log10(surface + 1.0), levels=30, cmap="viridis")
    fig.colorbar(cf, ax=ax1, label="log10(objective + 1)")
    ax1.plot(*problem.linear_data, "w.", ms=2)
    ax1.plot(*problem.kernel_data, "r.", ms=2)
    ax1.plot(axis, problem.linear_fit.predict(axis), "w-", lw=1)
    ax1.plot(axis, problem.kernel_fit.predict(axis), "r-", lw=1)
    ax1.plot(*x, "m*", ms=14)
    ax1.set_ylim(-60, 60)
    ax1.set_title("penalized objective, data, fitted boundaries")

    ax2.plot(report.history[:, 0], label="best")
    ax2.plot(report.history[:, 1], "--", label="population mean")
    ax2.set_xlabel("generation")
    ax2.set_ylabel("fitness")
    ax2.set_title("fitness history")
    ax2.legend()
    fig.tight_layout()
    fig.savefig("demos/03_dividing_plane.png", dpi=120)
    print("\nwrote demos/03_dividing_plane.png")
except ImportError:
    print("\nmatplotlib not available; skipped the plot")
