import math
from math import comb, factorial

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import eval_genlaguerre

from coherentops import DivergentSeriesError, PreconditionError
from coherentops.kernels import (
    T_SWITCH,
    abel_sum,
    abel_trace,
    abs_f_sq,
    f_direct,
    f_of_t,
    f_series,
    g_direct,
    g_of_t,
    g_series,
    laguerre_assoc,
    laguerre_eval,
    laguerre_sequence,
    neville_at_zero,
    phase_kernel,
)

times = st.floats(-10, 10, allow_nan=False)


def laguerre_by_sum(n, alpha, x):
    """Explicit alternating sum: sum_k (-1)^k C(n+alpha, n-k) x^k / k!."""
    return sum((-1) ** k * comb(n + alpha, n - k) * x**k / factorial(k) for k in range(n + 1))


class TestPhaseKernels:
    def test_exact_at_zero(self):
        assert f_of_t(0.0) == 1
        assert g_of_t(0.0) == -0.5

    def test_abs_f_at_pi(self):
        assert abs(f_of_t(np.pi)) == pytest.approx(2 / np.pi, abs=1e-15)

    def test_f_vanishes_at_full_turn(self):
        assert abs(f_of_t(2 * np.pi)) < 1e-15

    def test_g_at_full_turn(self):
        assert abs(g_of_t(2 * np.pi) - (-1j / (2 * np.pi))) < 1e-15

    def test_identity_at_one_point_three(self):
        g = g_of_t(1.3)
        assert abs(-(g + np.conj(g)) - abs(f_of_t(1.3)) ** 2) < 1e-15

    def test_vectorised(self):
        t = np.array([0.0, 1e-4, 1.0, 2 * np.pi])
        assert f_of_t(t).shape == (4,) and g_of_t(t).shape == (4,)

    def test_phase_kernel_record(self):
        k = phase_kernel(0.7)
        assert k.abs_f_sq == pytest.approx(abs(k.f) ** 2, abs=1e-14)
        assert k.abs_f_sq == pytest.approx(-2 * k.g.real, abs=1e-12)

    @given(times)
    def test_modulus_is_sinc(self, t):
        expected = abs(math.sin(t / 2) / (t / 2)) if t else 1.0
        assert abs(abs(f_of_t(t)) - expected) < 1e-12
        assert abs(float(abs_f_sq(t)) - abs(f_of_t(t)) ** 2) < 1e-14

    def test_modulus_and_gauge_identity_on_grid(self):
        t = np.random.default_rng(7).uniform(-10, 10, 1000)
        f, g = f_of_t(t), g_of_t(t)
        np.testing.assert_allclose(np.abs(f), np.abs(np.sin(t / 2) / (t / 2)), atol=1e-12)
        np.testing.assert_allclose(np.abs(f) ** 2 + g + np.conj(g), 0, atol=1e-12)

    def test_branch_agreement_near_switch(self):
        t = np.linspace(T_SWITCH / 2, 2 * T_SWITCH, 4001)
        t = np.concatenate([t, -t])
        assert np.abs(f_series(t) - f_direct(t)).max() <= 1e-13
        # g's direct branch loses digits to cancellation in expm1(it) - it
        assert np.abs(g_series(t) - g_direct(t)).max() <= 1e-12

    @given(st.floats(-T_SWITCH, T_SWITCH, exclude_min=True, exclude_max=True))
    def test_small_t_uses_series(self, t):
        assert f_of_t(t) == f_series(t)
        assert g_of_t(t) == g_series(t)


class TestLaguerre:
    def test_degree_zero(self):
        assert laguerre_assoc(0, 7, 3.3) == 1.0

    def test_degree_one(self):
        assert laguerre_assoc(1, 0, 0.25) == pytest.approx(0.75)

    def test_quadratic_alpha_one(self):
        x = 1.7
        assert laguerre_assoc(2, 1, x) == pytest.approx(3 - 3 * x + x**2 / 2, rel=1e-15)

    def test_negative_indices(self):
        with pytest.raises(PreconditionError):
            laguerre_assoc(-1, 0, 1.0)
        with pytest.raises(PreconditionError):
            laguerre_sequence(3, -2, 1.0)

    def test_eval_record(self):
        r = laguerre_eval(3, 2, 0.5)
        assert (r.n, r.alpha, r.x) == (3, 2, 0.5)
        assert r.value == pytest.approx(laguerre_by_sum(3, 2, 0.5))
        with pytest.raises(PreconditionError):
            laguerre_eval(1, 0, -1.0)

    @pytest.mark.parametrize("x", [0.0, 0.5, 1.0, 4.0])
    @pytest.mark.parametrize("alpha", range(6))
    def test_matches_explicit_sum(self, alpha, x):
        for n in range(11):
            ref = laguerre_by_sum(n, alpha, x)
            assert abs(laguerre_assoc(n, alpha, x) - ref) <= 1e-10 * max(1.0, abs(ref))

    @given(st.integers(0, 80), st.integers(0, 20), st.floats(0, 60))
    def test_matches_scipy(self, n, alpha, x):
        ref = eval_genlaguerre(n, alpha, x)
        assert abs(laguerre_assoc(n, alpha, x) - ref) <= 1e-9 * max(1.0, abs(ref))

    def test_sequence_matches_pointwise(self):
        x = np.array([0.3, 2.0, 9.0])
        seq = laguerre_sequence(30, 3, x)
        for n in (0, 1, 7, 30):
            np.testing.assert_allclose(seq[n], laguerre_assoc(n, 3, x), rtol=1e-14)

    def test_long_recurrence_is_stable(self):
        # the Abel trace runs the recurrence to ~10^5 terms
        seq = laguerre_sequence(100_000, 0, 0.8)
        n = np.array([10, 1000, 50_000, 100_000])
        np.testing.assert_allclose(seq[n], eval_genlaguerre(n, 0, 0.8), atol=1e-10)


class TestAbel:
    def test_alternating_ones(self):
        assert abs(abel_trace(np.pi) - 0.5) < 1e-10

    def test_quarter_turn(self):
        assert abs(abel_trace(np.pi / 2) - (0.5 + 0.5j)) < 1e-10

    @pytest.mark.parametrize("t", [0.0, 2 * np.pi, -4 * np.pi])
    def test_diverges_at_full_turns(self, t):
        with pytest.raises(DivergentSeriesError):
            abel_trace(t)

    @given(st.floats(0.3, 2 * np.pi - 0.3))
    def test_geometric_closed_form(self, t):
        assert abs(abel_trace(t) - 1 / (1 - np.exp(1j * t))) < 1e-6

    def test_convergent_series_is_unchanged(self):
        # sum 2^-n = 2
        assert abs(abel_sum(lambda n: 0.5**n) - 2) < 1e-12

    def test_neville_recovers_polynomial(self):
        h = np.array([0.5, 0.25, 0.125, 0.0625])
        vals = 3 - 2 * h + 5 * h**3
        assert neville_at_zero(h, vals) == pytest.approx(3, abs=1e-12)
