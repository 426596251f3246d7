"""Extended coherent operators ``U(z, t) = exp(z a^dag - conj(z) a + i t N)``.

Besides the brute-force exponential, this module provides every closed form
for ``U(z, t)``: both disentangled orderings, the commutation phase, matrix
elements through the substitution ``w = f(t) z``, the conjugated
decomposition and the Abel-regularised trace. The su(1,1) operator
``V(z, t) = exp(z K+ - conj(z) K- + i t K3)`` and the product ``U V`` are
available at construction level only.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .coherent import DisentangleForm, coherent_matrix_element, ordered_product
from .errors import DivergentSeriesError, DomainError, PreconditionError, TruncationWarning
from .kernels import abel_sum, abs_f_sq, f_of_t, g_of_t, laguerre_sequence
from .matrix_core import ComplexMatrix, band_of, band_residual, dim_of, expm_skew
from .oscillator import build_ladder, build_su11, number_phases

#: smallest |t| accepted by :func:`conjugated_decomposition`
DECOMPOSITION_MIN_T = 1e-6


@dataclass(frozen=True)
class ExtendedParam:
    """Parameter pair of ``U(z, t)``; ``t`` is kept as given, never folded mod 2 pi."""

    z: complex
    t: float


def _is_full_turn(t: float) -> bool:
    return abs(np.expm1(1j * t)) < 1e-12


def extended_generator(z: complex, t: float, cfg) -> ComplexMatrix:
    L = build_ladder(cfg)
    return z * L.a_dag - np.conj(z) * L.a + 1j * t * L.n_op


def extended_exact(z: complex, t: float, cfg) -> ComplexMatrix:
    return expm_skew(extended_generator(z, t, cfg))


def extended_disentangled(z: complex, t: float, cfg, form: DisentangleForm = DisentangleForm.NORMAL) -> ComplexMatrix:
    """Factorised ``U(z, t)``.

    NORMAL::

        e^{g|z|^2} e^{f z a^dag} e^{itN} e^{-f conj(z) a}

    ANTINORMAL::

        e^{-conj(g)|z|^2} e^{-conj(f) conj(z) a} e^{itN} e^{conj(f) z a^dag}

    with ``f = f(t)``, ``g = g(t)``.
    """
    z = complex(z)
    f, g = complex(f_of_t(t)), complex(g_of_t(t))
    x = abs(z) ** 2
    if DisentangleForm(form) is DisentangleForm.NORMAL:
        return ordered_product(g * x, (f * z, True), (-f * z.conjugate(), False), cfg, t=t)
    fc = f.conjugate()
    return ordered_product(-g.conjugate() * x, (-fc * z.conjugate(), False), (fc * z, True), cfg, t=t)


@dataclass(frozen=True)
class ExtendedMatrixElementParts:
    """``<n|U(z,t)|m> = exp(prefactor_exponent) * base_element``.

    ``prefactor_exponent = -|w|^2/2 - conj(g)|z|^2 + i t m`` and
    ``base_element = <n|U(w)|m>`` with ``w = f(t) z``.
    """

    n: int
    m: int
    z: complex
    t: float
    w: complex
    prefactor_exponent: complex
    base_element: complex

    @property
    def value(self) -> complex:
        return complex(np.exp(self.prefactor_exponent) * self.base_element)

    def ratio_form_exponent(self) -> complex:
        """The same exponent written as ``-(1/2 + conj(g)/|f|^2)|w|^2 + i t m``.

        This form divides by ``|f|^2`` and is undefined where ``f(t) = 0``.
        """
        fsq = float(abs_f_sq(self.t))
        if fsq == 0.0 or (self.t != 0 and _is_full_turn(self.t)):
            raise DomainError(f"|f(t)|^2 vanishes at t = {self.t}")
        g = complex(g_of_t(self.t))
        return -(0.5 + g.conjugate() / fsq) * abs(self.w) ** 2 + 1j * self.t * self.m


def matrix_element_parts(n: int, m: int, z: complex, t: float) -> ExtendedMatrixElementParts:
    if n < 0 or m < 0:
        raise PreconditionError(f"matrix element indices must be nonnegative, got ({n}, {m})")
    z = complex(z)
    w = complex(f_of_t(t)) * z
    g = complex(g_of_t(t))
    exponent = -abs(w) ** 2 / 2 - g.conjugate() * abs(z) ** 2 + 1j * t * m
    return ExtendedMatrixElementParts(n, m, z, float(t), w, exponent, coherent_matrix_element(n, m, w))


def extended_matrix_element(n: int, m: int, z: complex, t: float) -> complex:
    """Closed form of ``<n|U(z,t)|m>``; total in ``t``, including zeros of ``f``."""
    return matrix_element_parts(n, m, z, t).value


def extended_matrix_block(z: complex, t: float, n_max: int, m_max: int) -> np.ndarray:
    return np.array(
        [[extended_matrix_element(n, m, z, t) for m in range(m_max + 1)] for n in range(n_max + 1)],
        dtype=complex,
    )


def extended_commutation_phase(z: complex, t: float, w: complex, s: float) -> complex:
    """Scalar in ``U(z,t)U(w,s) = phase * U(w e^{it}, s) U(z e^{-is}, t)``."""
    z, w = complex(z), complex(w)
    ft, fs = complex(f_of_t(t)), complex(f_of_t(s))
    exponent = (ft * fs).conjugate() * z * w.conjugate() - ft * fs * z.conjugate() * w
    return complex(np.exp(exponent))


def extended_commutation_residual(z: complex, t: float, w: complex, s: float, cfg) -> float:
    """Band residual of the extended commutation relation, both sides by brute force."""
    lhs = extended_exact(z, t, cfg) @ extended_exact(w, s, cfg)
    rhs = extended_exact(w * np.exp(1j * t), s, cfg) @ extended_exact(z * np.exp(-1j * s), t, cfg)
    rhs = extended_commutation_phase(z, t, w, s) * rhs
    return band_residual(lhs, rhs, band_of(cfg))


def shift_form_generator(z: complex, t: float, cfg) -> ComplexMatrix:
    """``it (a + z/(it))^dag (a + z/(it)) - i|z|^2/t`` built literally.

    Algebraically equal to :func:`extended_generator` for ``t != 0``; it
    makes the full-turn values of ``U(z, t)`` evident, see
    :func:`full_turn_value`.
    """
    if t == 0:
        raise DomainError("shift form is undefined at t = 0")
    L = build_ladder(cfg)
    shifted = L.a + (z / (1j * t)) * np.eye(L.dim)
    return 1j * t * (shifted.conj().T @ shifted) - 1j * abs(z) ** 2 / t * np.eye(L.dim)


def full_turn_value(z: complex, t: float) -> complex:
    """Scalar ``e^{-i|z|^2/t}`` that ``U(z, t)`` equals when ``t`` is a nonzero multiple of ``2 pi``.

    The shifted number operator in the shift form has integer spectrum, so
    its ``e^{it(.)}`` is the identity at full turns.
    """
    if t == 0 or not _is_full_turn(t):
        raise DomainError(f"t = {t} is not a nonzero multiple of 2 pi")
    return complex(np.exp(-1j * abs(z) ** 2 / t))


def conjugated_decomposition(z: complex, t: float, cfg) -> ComplexMatrix:
    """``e^{-i|z|^2/t} e^{(i/t)(z a^dag + conj(z) a)} e^{itN} e^{-(i/t)(z a^dag + conj(z) a)}``.

    The conjugating factor displaces by ``iz/t``, so the cutoff must grow as
    ``|z|/|t|`` grows.
    """
    if abs(t) < DECOMPOSITION_MIN_T:
        raise DomainError(f"decomposition undefined at t = 0 (|t| = {abs(t):g} < {DECOMPOSITION_MIN_T:g})")
    L = build_ladder(cfg)
    V = expm_skew((1j / t) * (z * L.a_dag + np.conj(z) * L.a))
    phases = number_phases(L.dim, t)
    return np.exp(-1j * abs(z) ** 2 / t) * ((V * phases[None, :]) @ V.conj().T)


def extended_trace_closed(z: complex, t: float) -> complex:
    """Regularised trace ``e^{-i|z|^2/t} / (1 - e^{it})``."""
    if t == 0 or _is_full_turn(t):
        raise DivergentSeriesError(f"trace of U(z, t) diverges at t = {t} (multiple of 2 pi)")
    return complex(np.exp(-1j * abs(z) ** 2 / t) / (1 - np.exp(1j * t)))


def extended_trace_abel(z: complex, t: float) -> complex:
    """Abel sum of the closed-form diagonal ``sum_n <n|U(z,t)|n>``.

    The diagonal is ``exp(-|w|^2 - conj(g)|z|^2 + itn) L_n(|w|^2)``; the
    Laguerre values come from one forward recurrence over all ``n``.
    """
    if t == 0 or _is_full_turn(t):
        raise DivergentSeriesError(f"trace of U(z, t) diverges at t = {t} (multiple of 2 pi)")
    z = complex(z)
    x = float(abs_f_sq(t)) * abs(z) ** 2
    lead = -x - complex(g_of_t(t)).conjugate() * abs(z) ** 2

    def diagonal(n):
        lag = laguerre_sequence(int(n[-1]), 0, x)
        return np.exp(lead + 1j * t * n) * lag

    return abel_sum(diagonal)


def squeeze_generator(z: complex, t: float, cfg) -> ComplexMatrix:
    S = build_su11(cfg)
    return z * S.k_plus - np.conj(z) * S.k_minus + 1j * t * S.k3


def squeeze_extended(z: complex, t: float, cfg) -> ComplexMatrix:
    """``V(z, t)`` by brute-force exponentiation.

    Warns with :class:`TruncationWarning` for ``|z| >= 1``, where the
    hyperbolic growth of the su(1,1) orbit reaches the cutoff quickly.
    """
    if abs(z) >= 1:
        warnings.warn(f"|z| = {abs(z):.3g} >= 1: V(z, t) is poorly resolved at cutoff {dim_of(cfg)}",
                      TruncationWarning, stacklevel=2)
    return expm_skew(squeeze_generator(z, t, cfg))


def product_uv(z: complex, t: float, w: complex, s: float, cfg) -> ComplexMatrix:
    """``U(z, t) V(w, s)``."""
    return extended_exact(z, t, cfg) @ squeeze_extended(w, s, cfg)


def squeeze_vacuum_phases(s: float, dim: int) -> np.ndarray:
    """Diagonal of ``V(0, s) = e^{isK3}``: ``e^{is(n/2 + 1/4)}``."""
    return np.exp(1j * s * (np.arange(dim) / 2 + 0.25))

