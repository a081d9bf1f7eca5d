import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import sici

from planckqed.exceptions import ConvergenceError, DomainError
from planckqed.specfun import (GAUSS_WEIGHTS, KRONROD_WEIGHTS, auxiliary_fg,
                               integrate_adaptive, si_asymptotic, si_series, sinc,
                               sine_integral)


def si_oracle(x):
    return integrate_adaptive(sinc, 0.0, x, rel_tol=1e-14, abs_tol=1e-14).value


# values frozen from si_oracle at tolerance 1e-14
FROZEN = [
    (1.0, 0.946083070367183),
    (math.pi, 1.851937051982466),
    (0.1, 0.09994446110827696),
    (20.0, 1.548241701043440),
]


class TestQuadrature:
    def test_rule_weights(self):
        assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
        assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)

    def test_constant(self):
        r = integrate_adaptive(np.ones_like, 0.0, 1.0)
        assert r.value == pytest.approx(1.0, abs=1e-15)
        assert r.error_estimate >= 0 and r.evaluations >= 1

    def test_cubic_exact(self):
        assert integrate_adaptive(lambda t: t ** 3, 0, 1).value == pytest.approx(0.25, abs=1e-15)

    @pytest.mark.parametrize("deg", [5, 13, 22])
    def test_polynomials(self, deg):
        r = integrate_adaptive(lambda t: t ** deg, -1, 2, rel_tol=1e-13, abs_tol=1e-13)
        exact = (2 ** (deg + 1) - (-1) ** (deg + 1)) / (deg + 1)
        assert r.value == pytest.approx(exact, rel=1e-12)

    def test_sinc_on_zero_pi(self):
        r = integrate_adaptive(sinc, 0, math.pi, 1e-14, 1e-14)
        assert r.value == pytest.approx(1.851937051982466, abs=1e-13)
        assert r.value == pytest.approx(sine_integral(math.pi), abs=1e-13)

    def test_endpoint_singularity(self):
        # open rule never touches t = 0
        r = integrate_adaptive(lambda t: 1 / np.sqrt(t), 0, 1, 1e-8, 1e-8)
        assert r.value == pytest.approx(2.0, rel=1e-6)

    def test_empty_interval(self):
        assert integrate_adaptive(np.ones_like, 2.0, 2.0).value == 0.0

    def test_budget_exhaustion_carries_estimate(self):
        with pytest.raises(ConvergenceError) as info:
            integrate_adaptive(lambda t: np.sin(1e4 * t), 0, 100, 1e-15, 1e-15,
                               max_evaluations=3000)
        assert info.value.estimate is not None

    def test_bad_limits(self):
        with pytest.raises(DomainError):
            integrate_adaptive(np.ones_like, 1.0, 0.0)

    def test_within_tolerance(self):
        r = integrate_adaptive(np.exp, 0, 3, rel_tol=1e-9, abs_tol=1e-12)
        assert abs(r.value - math.expm1(3)) <= max(1e-12, 1e-9 * abs(r.value))


class TestSineIntegral:
    def test_zero(self):
        assert sine_integral(0.0) == 0.0
        assert si_series(0.0) == 0.0

    @pytest.mark.parametrize("x,expected", FROZEN)
    def test_frozen_values(self, x, expected):
        assert sine_integral(x) == pytest.approx(expected, abs=1e-12)
        assert si_oracle(x) == pytest.approx(expected, abs=1e-13)

    def test_against_scipy(self):
        x = np.logspace(-6, 4, 500)
        assert np.max(np.abs(sine_integral(x) - sici(x)[0])) < 1e-13

    @pytest.mark.parametrize("x", [1.0, 5.0, 37.5, 1e3])
    def test_limit_bound(self, x):
        assert abs(sine_integral(x) - math.pi / 2) <= 1 / x

    def test_oscillation_bound(self):
        x = np.linspace(2, 500, 5000)
        assert np.all(np.abs(sine_integral(x) - math.pi / 2) <= 2 / x)

    def test_series_three_terms(self):
        assert si_series(1.0, max_terms=3) == pytest.approx(1 - 1 / 18 + 1 / 600, abs=1e-16)
        assert si_series(1.0, max_terms=3) == pytest.approx(0.94611, abs=1e-5)

    def test_series_small(self):
        assert si_series(0.1, tol=1e-15) == pytest.approx(0.09994446110827696, abs=2e-15)

    @pytest.mark.parametrize("tol", [1e-4, 1e-8, 1e-12])
    def test_series_tolerance(self, tol):
        x = np.linspace(0, 8, 41)
        assert np.all(np.abs(si_series(x, tol) - sine_integral(x)) <= 2 * tol + 1e-14)

    def test_asymptotic_large(self):
        assert si_asymptotic(100.0) == pytest.approx(si_oracle(100.0), abs=1e-12)
        assert si_asymptotic(20.0) == pytest.approx(1.548241701, abs=1e-9)

    def test_auxiliary_leading_behaviour(self):
        # f ~ 1/x, g ~ 1/x^2
        f, g = auxiliary_fg(1e4)
        assert f == pytest.approx(1e-4, rel=1e-7)
        assert g == pytest.approx(1e-8, rel=1e-7)

    def test_branch_overlap(self):
        x = np.linspace(2, 8, 601)
        assert np.max(np.abs(si_series(x) - si_asymptotic(x))) <= 1e-10

    def test_branch_domains(self):
        with pytest.raises(DomainError):
            si_series(9.0)
        with pytest.raises(DomainError):
            si_asymptotic(1.0)

    @pytest.mark.parametrize("x", [-1.0, float("inf"), float("nan")])
    def test_bad_argument(self, x):
        with pytest.raises(DomainError):
            sine_integral(x)

    def test_array_shape(self):
        x = np.array([[0.0, 1.0], [5.0, 50.0]])
        assert sine_integral(x).shape == (2, 2)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(min_value=0.0, max_value=300.0))
    def test_matches_quadrature(self, x):
        assert abs(sine_integral(x) - si_oracle(x)) <= 1e-10

    @settings(max_examples=60, deadline=None)
    @given(st.floats(min_value=0.0, max_value=50.0), st.floats(min_value=1e-3, max_value=1.0))
    def test_derivative_is_sinc(self, x, h):
        # Si(x + h) - Si(x) equals the integral of sinc over [x, x + h]
        piece = integrate_adaptive(sinc, x, x + h, 1e-14, 1e-15).value
        assert sine_integral(x + h) - sine_integral(x) == pytest.approx(piece, abs=1e-12)
