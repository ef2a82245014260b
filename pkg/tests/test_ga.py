import numpy as np
import pytest

from stochga.ga import (
    GaConfig,
    SearchBox,
    blend_crossover,
    run_ga,
    tournament_select,
    uniform_mutate,
)


def box2(half=60.0):
    return SearchBox(np.array([-half, -half]), np.array([half, half]))


class TestSearchBox:
    def test_rejects_inverted_bounds(self):
        with pytest.raises(ValueError):
            SearchBox(np.array([0.0, 0.0]), np.array([1.0, -1.0]))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            SearchBox(np.array([0.0]), np.array([1.0, 2.0]))


class TestGaConfig:
    def test_rejects_elite_overflow(self):
        with pytest.raises(ValueError):
            GaConfig(population_size=4, generations=1, crossover_prob=0.5,
                     mutation_prob=0.1, elite_count=4)

    def test_rejects_bad_probabilities(self):
        with pytest.raises(ValueError):
            GaConfig(10, 1, crossover_prob=1.5, mutation_prob=0.1)


class TestTournament:
    def test_fitter_of_two_wins(self):
        rng = np.random.default_rng(0)
        pop = [np.zeros(1), np.zeros(1)]
        fits = np.array([1.0, 5.0])
        # With two members, whenever both are drawn the fitter must win; the
        # only other outcomes are self-draws.  Index 0 can only win via (0, 0).
        wins0 = sum(tournament_select(pop, fits, rng) == 0 for _ in range(2000))
        assert wins0 / 2000 == pytest.approx(0.25, abs=0.05)

    def test_single_member(self):
        rng = np.random.default_rng(1)
        assert tournament_select([np.zeros(1)], np.array([2.0]), rng) == 0

    def test_uniform_fitness_gives_uniform_selection(self):
        rng = np.random.default_rng(2)
        n, draws = 10, 10_000
        pop = [np.zeros(1)] * n
        fits = np.ones(n)
        counts = np.bincount(
            [tournament_select(pop, fits, rng) for _ in range(draws)], minlength=n
        )
        sigma = np.sqrt(draws * (1 / n) * (1 - 1 / n))
        assert np.all(np.abs(counts - draws / n) < 3 * sigma)


class TestBlendCrossover:
    def test_identical_parents(self):
        rng = np.random.default_rng(3)
        x = np.array([1.5, -2.0])
        c1, c2 = blend_crossover(x, x, rng)
        assert np.allclose(c1, x) and np.allclose(c2, x)

    def test_mirrored_pair_centers_on_midpoint(self):
        # The two children use complementary weights, so their average is the
        # parents' midpoint; with extension 0 each child stays in the hull.
        rng = np.random.default_rng(4)
        a, b = np.array([0.0, 0.0]), np.array([1.0, 1.0])
        for _ in range(100):
            c1, c2 = blend_crossover(a, b, rng, extension=0.0)
            assert np.allclose((c1 + c2) / 2, [0.5, 0.5])
            assert np.all(c1 >= 0) and np.all(c1 <= 1)

    def test_children_in_box_over_many_crossings(self):
        rng = np.random.default_rng(5)
        box = box2()
        for _ in range(10_000):
            a = rng.uniform(box.lower, box.upper)
            b = rng.uniform(box.lower, box.upper)
            c1, c2 = blend_crossover(a, b, rng, box=box)
            assert box.contains(c1) and box.contains(c2)

    def test_dimension_mismatch(self):
        rng = np.random.default_rng(6)
        with pytest.raises(ValueError):
            blend_crossover(np.zeros(2), np.zeros(3), rng)


class TestUniformMutate:
    def test_zero_probability_is_identity(self):
        rng = np.random.default_rng(7)
        x = np.array([3.0, -4.0])
        assert np.array_equal(uniform_mutate(x, box2(), 0.0, rng), x)

    def test_unit_probability_resamples_everything(self):
        rng = np.random.default_rng(8)
        x = np.array([3.0, -4.0])
        mutated = uniform_mutate(x, box2(), 1.0, rng)
        assert np.all(mutated != x)

    def test_empirical_rate(self):
        rng = np.random.default_rng(9)
        box = box2()
        x = np.zeros(2)
        trials = 50_000  # 100k coordinates in total
        flips = sum(
            int((uniform_mutate(x, box, 0.025, rng) != x).sum()) for _ in range(trials)
        )
        assert flips / (2 * trials) == pytest.approx(0.025, abs=0.005)


class TestRunGa:
    def test_converges_on_sphere(self):
        # Oracle: the exhaustive-grid maximum of -(x^2 + y^2) on the box is 0.
        cfg = GaConfig(80, 100, crossover_prob=0.7, mutation_prob=0.05, seed=11)
        result = run_ga(lambda x: -float(x @ x), box2(), cfg)
        assert result.best_fitness >= -1e-2

    def test_zero_generations_returns_initial_best(self):
        cfg = GaConfig(30, 0, crossover_prob=0.5, mutation_prob=0.05, seed=12)
        result = run_ga(lambda x: -float(x @ x), box2(), cfg)
        assert result.history.shape == (1, 2)
        assert result.best_fitness == result.history[0, 0]

    def test_same_seed_bit_identical(self):
        cfg = GaConfig(25, 30, crossover_prob=0.6, mutation_prob=0.1, seed=13)
        a = run_ga(lambda x: -float(x @ x), box2(), cfg)
        b = run_ga(lambda x: -float(x @ x), box2(), cfg)
        assert np.array_equal(a.best_candidate, b.best_candidate)
        assert a.best_fitness == b.best_fitness
        assert np.array_equal(a.history, b.history)

    def test_elitist_history_never_decreases(self):
        # Rugged fitness to stress the elitism invariant.
        def rugged(x):
            return float(np.sin(7 * x[0]) * np.cos(5 * x[1]) - 0.01 * (x @ x))

        cfg = GaConfig(20, 60, crossover_prob=0.8, mutation_prob=0.2, elite_count=1, seed=14)
        result = run_ga(rugged, box2(), cfg)
        assert np.all(np.diff(result.history[:, 0]) >= 0.0)
        assert result.best_fitness == result.history[-1, 0]

    def test_every_evaluated_candidate_in_box(self):
        seen = []

        def spy(x):
            seen.append(x.copy())
            return -float(x @ x)

        box = box2()
        run_ga(spy, box, GaConfig(15, 20, 0.9, 0.3, seed=15))
        assert len(seen) == 15 * 21
        assert all(box.contains(x) for x in seen)

    def test_fitness_arity_mismatch_propagates(self):
        def strict(x):
            if x.shape != (3,):
                raise ValueError("expected 3 coordinates")
            return 0.0

        with pytest.raises(ValueError):
            run_ga(strict, box2(), GaConfig(5, 1, 0.5, 0.1, seed=16))
