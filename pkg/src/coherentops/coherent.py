"""Coherent operators ``U(z) = exp(z a^dag - conj(z) a)`` and coherent states."""
from __future__ import annotations

import enum
import math
import warnings

import numpy as np

from .errors import PreconditionError, TruncationWarning
from .kernels import laguerre_assoc
from ._dd import dd_matmul, dd_powers
from .matrix_core import ComplexMatrix, band_of, dim_of, expm_ladder, expm_skew
from .oscillator import build_ladder, number_phases


class DisentangleForm(enum.Enum):
    """Ordering of the factorised exponential.

    ``NORMAL`` puts the creation factor leftmost, ``ANTINORMAL`` the
    annihilation factor.
    """

    NORMAL = "normal"
    ANTINORMAL = "antinormal"


def displacement_generator(z: complex, cfg) -> ComplexMatrix:
    L = build_ladder(cfg)
    return z * L.a_dag - np.conj(z) * L.a


def displacement_exact(z: complex, cfg) -> ComplexMatrix:
    """``U(z)`` by exponentiating the truncated generator."""
    return expm_skew(displacement_generator(z, cfg))


def ordered_product(scalar_exponent: complex, left: tuple, right: tuple, cfg, t: float | None = None) -> ComplexMatrix:
    """``exp(scalar_exponent) e^{L} [e^{itN}] e^{R}`` for ladder generators ``L``, ``R``.

    ``left`` and ``right`` are ``(coef, raising)`` pairs standing for
    ``coef * a^dag`` (``raising=True``) or ``coef * a``. The middle factor
    ``e^{itN}`` is included when ``t`` is given.

    Every entry of such a product is an alternating sum; at ``|z| = 2`` the
    terms of the ``(31, 31)`` entry exceed the result by ten orders of
    magnitude. The full matrix is formed in complex128, then the leading
    ``band_of(cfg)`` block is recomputed in
    double-double arithmetic.
    """
    dim = dim_of(cfg)
    band = band_of(cfg)
    scale = np.exp(complex(scalar_exponent))

    L = expm_ladder(left[0], dim, left[1])
    R = expm_ladder(right[0], dim, right[1])
    if t is not None:
        L = L * number_phases(dim, t)[None, :]
    full = scale * (L @ R)

    Ld = expm_ladder(left[0], dim, left[1], precise=True)[:band, :]
    Rd = expm_ladder(right[0], dim, right[1], precise=True)[:, :band]
    if t is not None:
        Ld = Ld * dd_powers(np.exp(1j * t), dim).reshape(1, dim)
    full[:band, :band] = scale * dd_matmul(Ld, Rd).to_complex()
    return full


def displacement_disentangled(z: complex, cfg, form: DisentangleForm = DisentangleForm.NORMAL) -> ComplexMatrix:
    """``U(z)`` as a scalar times two triangular exponentials.

    NORMAL: ``e^{-|z|^2/2} e^{z a^dag} e^{-conj(z) a}``;
    ANTINORMAL: ``e^{|z|^2/2} e^{-conj(z) a} e^{z a^dag}``.
    """
    z = complex(z)
    x = abs(z) ** 2
    create = (z, True)
    annihilate = (-z.conjugate(), False)
    if DisentangleForm(form) is DisentangleForm.NORMAL:
        return ordered_product(-x / 2, create, annihilate, cfg)
    return ordered_product(x / 2, annihilate, create, cfg)


def _sqrt_factorial_ratio(small: int, large: int) -> float:
    """``sqrt(small! / large!)`` for ``small <= large``."""
    try:
        return 1.0 / math.sqrt(math.perm(large, large - small))
    except OverflowError:
        return math.exp(0.5 * (math.lgamma(small + 1) - math.lgamma(large + 1)))


def coherent_matrix_element(n: int, m: int, z: complex) -> complex:
    """Closed form of ``<n|U(z)|m>`` in terms of associated Laguerre polynomials.

    For ``n >= m``::

        e^{-|z|^2/2} sqrt(m!/n!) z^(n-m) L_m^(n-m)(|z|^2)

    and for ``n < m``::

        e^{-|z|^2/2} sqrt(n!/m!) (-conj(z))^(m-n) L_n^(m-n)(|z|^2)
    """
    if n < 0 or m < 0:
        raise PreconditionError(f"matrix element indices must be nonnegative, got ({n}, {m})")
    z = complex(z)
    x = abs(z) ** 2
    gauss = math.exp(-x / 2)
    if n >= m:
        return gauss * _sqrt_factorial_ratio(m, n) * z ** (n - m) * float(laguerre_assoc(m, n - m, x))
    return gauss * _sqrt_factorial_ratio(n, m) * (-z.conjugate()) ** (m - n) * float(laguerre_assoc(n, m - n, x))


def coherent_matrix_block(z: complex, n_max: int, m_max: int) -> np.ndarray:
    """Closed-form ``<n|U(z)|m>`` for ``0 <= n <= n_max``, ``0 <= m <= m_max``."""
    return np.array(
        [[coherent_matrix_element(n, m, z) for m in range(m_max + 1)] for n in range(n_max + 1)],
        dtype=complex,
    )


def commutation_phase(z: complex, w: complex) -> complex:
    """Phase ``e^{z conj(w) - conj(z) w}`` in ``U(z)U(w) = phase * U(w)U(z)``."""
    z, w = complex(z), complex(w)
    return complex(np.exp(z * w.conjugate() - z.conjugate() * w))


def truncation_tail(z: complex, dim: int) -> float:
    """Amplitude ``e^{-|z|^2/2} |z|^D / sqrt(D!)`` of the first state lost at cutoff ``D``."""
    x = abs(z) ** 2
    if x == 0:
        return 0.0
    return math.exp(-x / 2 + dim * math.log(abs(z)) - 0.5 * math.lgamma(dim + 1))


def coherent_state(z: complex, cfg, tol: float | None = None) -> np.ndarray:
    """``|z> = U(z)|0>``, the first column of :func:`displacement_exact`.

    Emits a :class:`TruncationWarning` when the amplitude at the cutoff
    exceeds ``tol`` (``cfg.tol`` by default).
    """
    dim = dim_of(cfg)
    if tol is None:
        tol = getattr(cfg, "tol", 1e-9)
    tail = truncation_tail(z, dim)
    if tail > tol:
        warnings.warn(
            f"coherent state |{z}> has amplitude {tail:.2e} at cutoff {dim}; increase dim",
            TruncationWarning,
            stacklevel=2,
        )
    return displacement_exact(z, cfg)[:, 0].copy()
