import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from coherentops import PreconditionError, TruncationConfig
from coherentops.matrix_core import (
    band_of,
    band_residual,
    dim_of,
    expm_ladder,
    expm_skew,
    expm_triangular,
    max_entry,
    unitarity_residual,
)

seeds = st.integers(0, 2**32 - 1)


def random_skew(n, seed, scale=1.0):
    r = np.random.default_rng(seed)
    M = r.normal(size=(n, n)) + 1j * r.normal(size=(n, n))
    return scale * (M - M.conj().T) / 2


class TestTruncationConfig:
    def test_defaults(self):
        c = TruncationConfig()
        assert (c.dim, c.band, c.tol) == (128, 32, 1e-9)

    @pytest.mark.parametrize("kw", [dict(dim=0), dict(band=0), dict(dim=10, band=6), dict(tol=0.0)])
    def test_rejects_invalid(self, kw):
        with pytest.raises(PreconditionError):
            TruncationConfig(**kw)

    def test_band_at_half_is_allowed(self):
        assert TruncationConfig(dim=10, band=5).band == 5

    def test_int_shorthand(self):
        assert dim_of(64) == 64 and band_of(64) == 32
        assert band_of(20) == 10
        assert band_of(TruncationConfig(256, 16)) == 16


class TestExpmSkew:
    def test_zero_gives_identity(self):
        np.testing.assert_array_equal(expm_skew(np.zeros((4, 4))), np.eye(4))

    def test_diagonal_phases(self):
        # exp(i diag(1, 2)) is diagonal with the obvious phases
        U = expm_skew(np.diag([1j, 2j]))
        np.testing.assert_allclose(U, np.diag(np.exp([1j, 2j])), atol=1e-15)

    def test_rotation_generator(self):
        theta = 0.3
        U = expm_skew(np.array([[0, -theta], [theta, 0]]))
        R = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
        np.testing.assert_allclose(U, R, atol=1e-15)

    def test_rejects_hermitian(self):
        with pytest.raises(PreconditionError, match="anti-Hermitian"):
            expm_skew(np.array([[1.0, 0], [0, 1.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(PreconditionError):
            expm_skew(np.zeros((2, 3)))

    @given(seeds, st.integers(1, 40), st.floats(0.01, 5))
    def test_unitary_and_matches_scipy(self, seed, n, scale):
        X = random_skew(n, seed, scale)
        U = expm_skew(X)
        assert unitarity_residual(U) < 1e-12
        assert max_entry(U - expm(X)) < 1e-11

    @given(seeds)
    def test_inverse_is_negated_generator(self, seed):
        X = random_skew(12, seed)
        assert max_entry(expm_skew(X) @ expm_skew(-X) - np.eye(12)) < 1e-13


class TestExpmTriangular:
    def test_jordan_block(self):
        # exp of the 3x3 shift: [[1, 1, 1/2], [0, 1, 1], [0, 0, 1]]
        J = np.diag([1.0, 1.0], 1)
        expected = np.array([[1, 1, 0.5], [0, 1, 1], [0, 0, 1]])
        np.testing.assert_allclose(expm_triangular(J), expected, atol=0)

    def test_zero_matrix(self):
        np.testing.assert_array_equal(expm_triangular(np.zeros((3, 3))), np.eye(3))

    def test_rejects_general_matrix(self):
        with pytest.raises(PreconditionError, match="triangular"):
            expm_triangular(np.ones((3, 3)))

    def test_rejects_diagonal_entries(self):
        with pytest.raises(PreconditionError):
            expm_triangular(np.eye(3) + np.diag([1.0, 1.0], 1))

    @given(seeds, st.integers(2, 30), st.sampled_from(["upper", "lower"]), st.integers(1, 12))
    def test_matches_scipy(self, seed, n, kind, bands):
        r = np.random.default_rng(seed)
        M = r.normal(size=(n, n)) + 1j * r.normal(size=(n, n))
        M = np.triu(M, 1) if kind == "upper" else np.tril(M, -1)
        # keep only the first few off-diagonals so both the sparse and dense paths run
        keep = np.abs(np.subtract.outer(np.arange(n), np.arange(n))) <= bands
        M = 0.5 * M * keep
        np.testing.assert_allclose(expm_triangular(M), expm(M), rtol=1e-12, atol=1e-12)

    def test_clongdouble_dtype(self):
        J = np.diag(np.ones(5), -1)
        E = expm_triangular(J, dtype=np.clongdouble)
        assert E.dtype == np.clongdouble
        assert E[5, 0] == pytest.approx(1 / 120)


class TestExpmLadder:
    @pytest.mark.parametrize("raising", [True, False])
    def test_plain_matches_scipy(self, raising):
        D = 24
        a = np.diag(np.sqrt(np.arange(1, D)), 1)
        X = 0.8j * (a.T if raising else a)
        np.testing.assert_allclose(expm_ladder(0.8j, D, raising), expm(X), atol=1e-12, rtol=1e-12)

    @pytest.mark.parametrize("raising", [True, False])
    def test_precise_agrees_with_plain(self, raising):
        coef = 1.3 - 0.4j
        plain = expm_ladder(coef, 30, raising)
        precise = expm_ladder(coef, 30, raising, precise=True).to_complex()
        np.testing.assert_allclose(precise, plain, rtol=1e-13, atol=0)


class TestResiduals:
    def test_band_residual_restricts_to_block(self):
        A = np.zeros((4, 4))
        B = np.zeros((4, 4))
        B[3, 3] = 1.0
        assert band_residual(A, B, 2) == 0.0
        assert band_residual(A, B, 4) == 1.0

    def test_band_residual_shape_mismatch(self):
        with pytest.raises(PreconditionError, match="mismatch"):
            band_residual(np.zeros((3, 3)), np.zeros((4, 4)), 2)

    def test_band_too_large(self):
        with pytest.raises(PreconditionError):
            band_residual(np.zeros((3, 3)), np.zeros((3, 3)), 4)

    @given(seeds)
    def test_band_residual_is_max_entry_on_block(self, seed):
        r = np.random.default_rng(seed)
        A, B = r.normal(size=(2, 6, 6))
        assert band_residual(A, B, 3) == np.abs(A[:3, :3] - B[:3, :3]).max()
