"""Real-coded genetic algorithm: bounded maximization with elitism.

Selection is binary tournament, crossover an arithmetic blend with a small
extension factor, and mutation resamples coordinates uniformly inside the
search box.  All randomness flows through numpy generators seeded from a
single 64-bit seed: one child stream for the initial population and one per
generation, so runs are bit-reproducible across platforms and independent of
fitness-evaluation order (evaluations are collected by index and never touch
the random streams).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SearchBox",
    "GaConfig",
    "GaResult",
    "tournament_select",
    "blend_crossover",
    "uniform_mutate",
    "run_ga",
]


@dataclass(frozen=True)
class SearchBox:
    """Axis-aligned box of per-dimension bounds, lower[i] < upper[i]."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ValueError("bounds must be 1-D vectors of equal length")
        if not np.all(lower < upper):
            raise ValueError("each lower bound must be strictly below its upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dimension(self) -> int:
        return self.lower.size

    def clip(self, x):
        return np.clip(x, self.lower, self.upper)

    def contains(self, x) -> bool:
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def sample(self, rng, size):
        return rng.uniform(self.lower, self.upper, size=(size, self.dimension))


@dataclass(frozen=True)
class GaConfig:
    population_size: int
    generations: int
    crossover_prob: float
    mutation_prob: float
    elite_count: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("population_size must be positive")
        if self.generations < 0:
            raise ValueError("generations must be nonnegative")
        if not 0.0 <= self.crossover_prob <= 1.0 or not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError("crossover and mutation probabilities must lie in [0, 1]")
        if not 0 <= self.elite_count < self.population_size:
            raise ValueError("elite_count must be nonnegative and below population_size")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")


@dataclass
class GaResult:
    """Best-ever candidate plus per-generation (best, mean) fitness records."""

    best_candidate: np.ndarray
    best_fitness: float
    history: np.ndarray = field(repr=False)  # shape (generations + 1, 2)


def tournament_select(population, fitnesses, rng) -> int:
    """Index of the fitter of two uniformly drawn members (binary tournament)."""
    n = len(population)
    i = int(rng.integers(n))
    j = int(rng.integers(n))
    return i if fitnesses[i] >= fitnesses[j] else j


def blend_crossover(a, b, rng, extension=0.1, box=None):
    """Mirrored arithmetic blend of two parents.

    Per-coordinate weights are drawn from U(-extension, 1 + extension); the
    second child uses the complementary weights.  When a box is supplied the
    children are clipped into it, which keeps extended blends feasible.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("parents must have the same dimension")
    u = rng.uniform(-extension, 1.0 + extension, size=a.shape)
    first = u * a + (1.0 - u) * b
    second = (1.0 - u) * a + u * b
    if box is not None:
        first = box.clip(first)
        second = box.clip(second)
    return first, second


def uniform_mutate(x, box, mutation_prob, rng):
    """Resample each coordinate uniformly in its bounds with the given probability."""
    x = np.asarray(x, dtype=float).copy()
    mask = rng.random(x.shape) < mutation_prob
    if np.any(mask):
        x[mask] = rng.uniform(box.lower[mask], box.upper[mask])
    return x


def _evaluate(fitness, population):
    # Collected by index so a parallel map would leave runs bit-identical.
    return np.array([float(fitness(ind)) for ind in population])


def run_ga(fitness, box: SearchBox, cfg: GaConfig) -> GaResult:
    """Maximize ``fitness`` over ``box``.

    Every candidate ever evaluated lies inside the box; with at least one
    elite the per-generation best fitness never decreases.  Identical
    (fitness, box, cfg) produce bit-identical results.
    """
    streams = np.random.SeedSequence(cfg.seed).spawn(cfg.generations + 1)
    rng = np.random.Generator(np.random.PCG64(streams[0]))
    population = box.sample(rng, cfg.population_size)
    fitnesses = _evaluate(fitness, population)

    best = int(np.argmax(fitnesses))
    best_candidate = population[best].copy()
    best_fitness = float(fitnesses[best])

    history = np.empty((cfg.generations + 1, 2))
    history[0] = (fitnesses.max(), fitnesses.mean())

    for gen in range(cfg.generations):
        rng = np.random.Generator(np.random.PCG64(streams[gen + 1]))
        elite_order = np.argsort(-fitnesses, kind="stable")[: cfg.elite_count]
        offspring = [population[i].copy() for i in elite_order]
        while len(offspring) < cfg.population_size:
            pa = population[tournament_select(population, fitnesses, rng)]
            pb = population[tournament_select(population, fitnesses, rng)]
            if rng.random() < cfg.crossover_prob:
                ca, cb = blend_crossover(pa, pb, rng, box=box)
            else:
                ca, cb = pa.copy(), pb.copy()
            for child in (ca, cb):
                if len(offspring) < cfg.population_size:
                    offspring.append(uniform_mutate(child, box, cfg.mutation_prob, rng))
        population = np.asarray(offspring)
        fitnesses = _evaluate(fitness, population)
        gen_best = int(np.argmax(fitnesses))
        if fitnesses[gen_best] > best_fitness:
            best_fitness = float(fitnesses[gen_best])
            best_candidate = population[gen_best].copy()
        history[gen + 1] = (fitnesses.max(), fitnesses.mean())

    return GaResult(best_candidate=best_candidate, best_fitness=best_fitness, history=history)
