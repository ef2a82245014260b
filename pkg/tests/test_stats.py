import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stochga.stats import (
    chisq2_cdf,
    chisq2_quantile,
    norm_cdf,
    norm_pdf,
    norm_quantile,
    t_cdf,
)


class TestNormCdf:
    def test_median(self):
        assert norm_cdf(0.0) == 0.5

    def test_value_against_high_precision_erf(self):
        # Oracle: mpmath's arbitrary-precision erf, independent of scipy.
        mp = pytest.importorskip("mpmath")
        expected = float(0.5 * (1 + mp.erf(mp.mpf("1.96") / mp.sqrt(2))))
        assert abs(expected - 0.9750021) < 5e-8  # sanity on the oracle itself
        assert norm_cdf(1.96) == pytest.approx(expected, abs=1e-6)

    def test_deep_tail_saturates(self):
        assert norm_cdf(-100.0) == 0.0
        assert norm_cdf(100.0) == 1.0

    def test_symmetry(self):
        zs = np.linspace(-8, 8, 161)
        assert np.max(np.abs(norm_cdf(zs) + norm_cdf(-zs) - 1.0)) < 1e-12

    def test_monotone(self):
        zs = np.linspace(-10, 10, 2001)
        assert np.all(np.diff(norm_cdf(zs)) >= 0.0)


class TestNormQuantile:
    def test_median(self):
        assert norm_quantile(0.5) == pytest.approx(0.0, abs=1e-12)

    def test_tail_values_against_bisection(self):
        # Oracle: plain bisection on norm_cdf, written out here.
        def bisect(p):
            lo, hi = -10.0, 10.0
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if norm_cdf(mid) < p:
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)

        assert norm_quantile(0.05) == pytest.approx(bisect(0.05), abs=1e-9)
        assert norm_quantile(0.05) == pytest.approx(-1.6449, abs=1e-3)
        assert norm_quantile(0.975) == pytest.approx(1.9600, abs=1e-3)

    @given(st.floats(min_value=1e-9, max_value=1 - 1e-9))
    @settings(max_examples=200, deadline=None)
    def test_roundtrip(self, p):
        assert norm_cdf(norm_quantile(p)) == pytest.approx(p, abs=1e-9)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.2, 1.5])
    def test_rejects_out_of_range(self, p):
        with pytest.raises(ValueError):
            norm_quantile(p)


class TestChisq2:
    def test_lower_bound(self):
        assert chisq2_cdf(0.0) == 0.0

    def test_quantile_value(self):
        assert chisq2_quantile(0.95) == pytest.approx(-2.0 * math.log(0.05), abs=1e-12)
        assert chisq2_quantile(0.95) == pytest.approx(5.99146, abs=1e-4)

    def test_inverse_pair(self):
        assert chisq2_cdf(chisq2_quantile(0.3)) == pytest.approx(0.3, abs=1e-12)
        grid = np.linspace(0.0, 0.999, 200)
        assert np.max(np.abs(chisq2_cdf(chisq2_quantile(grid)) - grid)) < 1e-12

    def test_rejects_invalid(self):
        with pytest.raises(ValueError):
            chisq2_cdf(-0.1)
        with pytest.raises(ValueError):
            chisq2_quantile(1.0)


class TestTCdf:
    def test_symmetry_at_zero(self):
        assert t_cdf(0.0, 28) == 0.5

    def test_value_against_density_quadrature(self):
        # Oracle: numerical integration of the t density written from scratch.
        from scipy.integrate import quad

        df = 28

        def density(t):
            return (
                math.gamma((df + 1) / 2)
                / (math.sqrt(df * math.pi) * math.gamma(df / 2))
                * (1 + t * t / df) ** (-(df + 1) / 2)
            )

        integral, _ = quad(density, 0.0, 2.048)
        expected = 0.5 + integral
        assert expected == pytest.approx(0.975, abs=5e-4)  # sanity on the oracle
        assert t_cdf(2.048, 28) == pytest.approx(expected, abs=1e-10)

    def test_normal_limit(self):
        assert t_cdf(1.0, 1000) == pytest.approx(norm_cdf(1.0), abs=1e-3)
        zs = np.arange(-4, 5, dtype=float)
        assert np.max(np.abs(t_cdf(zs, 10**6) - norm_cdf(zs))) < 1e-4

    @given(st.floats(min_value=-50, max_value=50), st.integers(min_value=1, max_value=500))
    @settings(max_examples=200, deadline=None)
    def test_symmetry_property(self, t, df):
        assert t_cdf(-t, df) == pytest.approx(1.0 - t_cdf(t, df), abs=1e-10)

    def test_rejects_zero_df(self):
        with pytest.raises(ValueError):
            t_cdf(1.0, 0)

    def test_monotone_and_bounded(self):
        ts = np.linspace(-30, 30, 501)
        vals = t_cdf(ts, 5)
        assert np.all(np.diff(vals) >= 0.0)
        assert np.all((vals >= 0.0) & (vals <= 1.0))


def test_norm_pdf_matches_cdf_derivative():
    zs = np.linspace(-5, 5, 41)
    h = 1e-6
    fd = (norm_cdf(zs + h) - norm_cdf(zs - h)) / (2 * h)
    assert np.max(np.abs(fd - norm_pdf(zs))) < 1e-8
