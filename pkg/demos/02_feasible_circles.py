"""Minimizing the Rastrigin function over a union of noisily observed discs.

Seven feasible discs of radius 10 sit on the diagonal; only 10 noisy readings
of each center are available.  Each reading cloud yields a feasibility
probability for any candidate point (the tail level of the confidence ellipse
whose distance to the candidate equals the disc radius), and the smooth
penalty turns those probabilities into a fitness the GA can climb.  The
central disc contains the global optimum (0, 0), so a good run drives the raw
Rastrigin value to ~0.

Run:  python3 demos/02_feasible_circles.py
"""

import numpy as np

from stochga import gen_circle_scenario, run_experiment
from stochga.benchmarks import rastrigin, realize, run_replicated

scenario = gen_circle_scenario(m=7, n=10, seed=42)
problem = realize(scenario)

print("scenario: 7 discs, radius 10, centers 15k - 60 on the diagonal")
print("readings per center:", scenario.geometry.n_readings)
print("penalty: ceiling 7200, alpha = target = 0.05, steepness 10000")
print("GA: pop 80, 100 generations, crossover 0.5, mutation 0.025\n")

report = run_experiment(scenario)
print(f"best candidate     : {np.round(report.best_candidate, 6)}")
print(f"raw Rastrigin value: {report.best_objective:.3e}")
print(f"penalty at best    : {report.penalty_at_best:.3e}")
print(f"wall clock         : {report.wall_clock_s:.2f}s")

print("\naveraging fitness curves over 5 replicate runs...")
replicated = run_replicated(scenario, 5)
for gen in (0, 10, 25, 50, 100):
    print(f"  mean best fitness at generation {gen:3d}: {replicated.mean_best_curve[gen]:12.4f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))
    grid = np.linspace(-60, 60, 240)
    xx, yy = np.meshgrid(grid, grid)
    zz = rastrigin(np.stack([xx, yy], axis=-1))
    ax1.contourf(xx, yy, zz, levels=30, cmap="viridis")
    for k, fit in enumerate(problem.fits):
        circle = plt.Circle(problem.scenario.geometry.centers()[k], 10.0,
                            fill=False, color="red", lw=1.2)
        ax1.add_patch(circle)
        ax1.plot(*problem.readings[k].T, "r.", ms=2)
    ax1.plot(*report.best_candidate, "w*", ms=14, label="best found")
    ax1.set_title("Rastrigin landscape, feasible discs, readings")
    ax1.legend(loc="upper left")

    ax2.plot(replicated.mean_best_curve, label="mean best")
    ax2.plot(replicated.mean_mean_curve, "--", label="mean of population mean")
    ax2.set_xlabel("generation")
    ax2.set_ylabel("fitness")
    ax2.set_title("mean fitness over 5 runs")
    ax2.legend()
    fig.tight_layout()
    fig.savefig("demos/02_feasible_circles.png", dpi=120)
    print("\nwrote demos/02_feasible_circles.png")
except ImportError:
    print("\nmatplotlib not available; skipped the plot")
