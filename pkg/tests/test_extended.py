import cmath

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coherentops import (
    DisentangleForm,
    DivergentSeriesError,
    DomainError,
    PreconditionError,
    TruncationConfig,
    TruncationWarning,
    build_ladder,
    conjugated_decomposition,
    displacement_exact,
    extended_commutation_phase,
    extended_commutation_residual,
    extended_disentangled,
    extended_exact,
    extended_matrix_block,
    extended_matrix_element,
    extended_trace_abel,
    extended_trace_closed,
    f_of_t,
    full_turn_value,
    matrix_element_parts,
    product_uv,
    squeeze_extended,
    squeeze_vacuum_phases,
    unitarity_residual,
)
from coherentops.extended import ExtendedParam, shift_form_generator
from coherentops.matrix_core import band_residual, expm_skew, max_entry

SMALL = TruncationConfig(64, 16)
times = st.floats(-6, 6, allow_nan=False)


@st.composite
def disc(draw, radius=2.0):
    r = draw(st.floats(0, radius))
    phi = draw(st.floats(0, 2 * np.pi))
    return complex(r * np.cos(phi), r * np.sin(phi))


# 30-digit matrix exponential at cutoff 60
FROZEN = [
    (0.5 - 0.3j, 1.3, (2, 4), complex(0.071226326552054482, -0.34999786203364058)),
    (0.5 - 0.3j, 1.3, (4, 2), complex(-0.3303353822247561, 0.13583161735267492)),
    (0.5 - 0.3j, 1.3, (0, 0), complex(0.86100102568841699, -0.058367325393424413)),
    (0.5 - 0.3j, 1.3, (3, 3), complex(-0.16086016106239431, -0.13295875176599576)),
    (1.1 + 0.4j, 2 * np.pi - 5e-5, (0, 0), complex(0.97632206239635866, -0.21632205248509249)),
    (1.1 + 0.4j, 2 * np.pi - 5e-5, (2, 1), complex(-1.3060255924321637e-5, -1.7161013032650777e-6)),
    (1.1 + 0.4j, 2 * np.pi - 5e-5, (1, 2), complex(1.1111998443365684e-5, -7.0738093758939478e-6)),
]


def test_param_keeps_t_unfolded():
    p = ExtendedParam(1j, 7.0)
    assert p.t == 7.0


class TestExact:
    def test_reduces_to_displacement_at_zero_t(self):
        z = 1.2 + 0.3j
        np.testing.assert_array_equal(extended_exact(z, 0.0, SMALL), displacement_exact(z, SMALL))

    def test_pure_phase_at_zero_z(self):
        np.testing.assert_allclose(extended_exact(0, 0.8, SMALL), np.diag(np.exp(0.8j * np.arange(64))), atol=1e-14)

    @given(disc(), times)
    def test_unitary(self, z, t):
        assert unitarity_residual(extended_exact(z, t, SMALL)) < 1e-12

    def test_shift_form_is_same_generator(self):
        z, t = 0.7 - 0.2j, 1.9
        L = build_ladder(SMALL)
        direct = z * L.a_dag - np.conj(z) * L.a + 1j * t * L.n_op
        # a^dag a differs from N only at the truncation corner
        assert band_residual(shift_form_generator(z, t, SMALL), direct, 63) < 1e-13

    def test_shift_form_needs_nonzero_t(self):
        with pytest.raises(DomainError):
            shift_form_generator(1.0, 0.0, SMALL)


class TestDisentangled:
    @pytest.mark.parametrize("form", list(DisentangleForm))
    def test_t_zero_matches_coherent(self, form):
        z = 1.3 - 0.6j
        ref = displacement_exact(z, SMALL)
        assert band_residual(extended_disentangled(z, 0.0, SMALL, form), ref, 16) < 1e-13

    @given(disc(), times, st.sampled_from(list(DisentangleForm)))
    def test_matches_exact_on_band(self, z, t, form):
        err = band_residual(extended_disentangled(z, t, SMALL, form), extended_exact(z, t, SMALL), SMALL.band)
        assert err < 1e-11

    def test_both_forms_at_full_size(self, cfg):
        z, t = 2 * np.exp(2.1j), -5.3
        ref = extended_exact(z, t, cfg)
        for form in DisentangleForm:
            assert band_residual(extended_disentangled(z, t, cfg, form), ref, cfg.band) < 1e-11


class TestMatrixElements:
    @pytest.mark.parametrize("z, t, nm, expected", FROZEN)
    def test_frozen_values(self, z, t, nm, expected):
        assert abs(extended_matrix_element(*nm, z, t) - expected) < 1e-13

    def test_zero_z_is_diagonal_phase(self):
        block = extended_matrix_block(0.0, np.pi / 2, 3, 3)
        np.testing.assert_allclose(block, np.diag(np.exp(0.5j * np.pi * np.arange(4))), atol=1e-15)

    def test_exactly_at_full_turn(self):
        # f = 0 there: only the diagonal survives, each entry the scalar e^{-i|z|^2/t}
        z, t = 0.9 - 0.4j, 2 * np.pi
        block = extended_matrix_block(z, t, 4, 4)
        np.testing.assert_allclose(block, full_turn_value(z, t) * np.eye(5), atol=1e-14)

    def test_ratio_form_agrees_away_from_zeros(self):
        p = matrix_element_parts(3, 2, 0.8 + 0.1j, 2.2)
        assert abs(p.ratio_form_exponent() - p.prefactor_exponent) < 1e-13
        assert p.w == pytest.approx(f_of_t(2.2) * (0.8 + 0.1j))

    def test_ratio_form_undefined_at_zero_of_f(self):
        with pytest.raises(DomainError):
            matrix_element_parts(1, 1, 0.5, 2 * np.pi).ratio_form_exponent()

    def test_negative_index(self):
        with pytest.raises(PreconditionError):
            extended_matrix_element(0, -2, 1.0, 1.0)

    @given(disc(), times)
    def test_block_matches_exact(self, z, t):
        block = extended_matrix_block(z, t, 20, 20)
        assert max_entry(block - extended_exact(z, t, 128)[:21, :21]) < 1e-11

    @given(disc(), st.floats(-1e-4, 1e-4), st.sampled_from([1, -1, 2]))
    def test_near_full_turns(self, z, dt, k):
        t = 2 * np.pi * k + dt
        block = extended_matrix_block(z, t, 12, 12)
        assert max_entry(block - extended_exact(z, t, 128)[:13, :13]) < 1e-11


class TestCommutation:
    def test_reduces_to_coherent_phase(self):
        z, w = 0.3 + 0.4j, -1.0 + 0.2j
        assert extended_commutation_phase(z, 0, w, 0) == pytest.approx(cmath.exp(z * w.conjugate() - z.conjugate() * w))

    @given(disc(), times, disc(), times)
    def test_relation_on_band(self, z, t, w, s):
        assert extended_commutation_residual(z, t, w, s, SMALL) < 1e-11


class TestDecomposition:
    @given(disc(1.0), st.floats(0.5, 3.0))
    def test_matches_exact(self, z, t):
        cfg = TruncationConfig(128, 16)
        err = band_residual(conjugated_decomposition(z, t, cfg), extended_exact(z, t, cfg), 16)
        assert err < 1e-10

    def test_undefined_at_zero(self):
        with pytest.raises(DomainError):
            conjugated_decomposition(1.0, 0.0, SMALL)


class TestFullTurn:
    @pytest.mark.parametrize("k", [1, -1, 2])
    def test_operator_is_scalar(self, k):
        z, t = 1.1 - 0.7j, 2 * np.pi * k
        U = extended_exact(z, t, 128)
        assert band_residual(U, full_turn_value(z, t) * np.eye(128), 32) < 1e-12

    def test_rejects_other_t(self):
        with pytest.raises(DomainError):
            full_turn_value(1.0, 1.0)
        with pytest.raises(DomainError):
            full_turn_value(1.0, 0.0)


class TestTrace:
    @pytest.mark.parametrize(
        "z, t, expected",
        [
            (0, 1.0, 0.5 + 0.91524386085622596j),
            (0, 2.5, 0.5 + 0.16613670862726428j),
            (0, np.pi, 0.5 + 0j),
            (1, 1.0, 1.0403023058681397 + 0.073772876048329453j),
            (1, 2.5, 0.52522717867168707 - 0.041687129165729523j),
            (1, np.pi, 0.47488285769081933 - 0.1564808981038933j),
        ],
    )
    def test_closed_form_values(self, z, t, expected):
        assert abs(extended_trace_closed(z, t) - expected) < 1e-14

    @pytest.mark.parametrize("z, t", [(0.5j, 1.7), (1.5, -2.2)])
    def test_abel_matches_closed(self, z, t):
        assert abs(extended_trace_abel(z, t) - extended_trace_closed(z, t)) < 1e-6

    @pytest.mark.parametrize("fn", [extended_trace_abel, extended_trace_closed])
    @pytest.mark.parametrize("t", [0.0, 2 * np.pi])
    def test_diverges(self, fn, t):
        with pytest.raises(DivergentSeriesError):
            fn(1.0, t)


class TestSqueeze:
    @given(disc(0.9), times)
    def test_unitary(self, z, t):
        assert unitarity_residual(squeeze_extended(z, t, SMALL)) < 1e-11 * SMALL.dim

    @given(times)
    def test_vacuum_phases(self, s):
        V = squeeze_extended(0.0, s, SMALL)
        assert max_entry(V - np.diag(squeeze_vacuum_phases(s, 64))) < 1e-12

    def test_warns_for_large_z(self):
        with pytest.warns(TruncationWarning):
            squeeze_extended(1.2, 0.0, SMALL)

    def test_product_unitary(self):
        assert unitarity_residual(product_uv(1.0 + 0.5j, 2.0, 0.3j, -1.0, SMALL)) < 1e-10

    def test_even_parity_from_vacuum(self):
        # K+ and K- change n by two, so the vacuum only reaches even states
        psi = squeeze_extended(0.4 - 0.2j, 0.7, SMALL)[:, 0]
        assert max_entry(psi[1::2]) < 1e-15
        assert np.linalg.norm(psi) == pytest.approx(1.0)

    def test_matches_generic_exponential(self):
        from coherentops.extended import squeeze_generator

        X = squeeze_generator(0.5, 1.0, SMALL)
        np.testing.assert_allclose(squeeze_extended(0.5, 1.0, SMALL), expm_skew(X), atol=0)
