"""Scalar kernels: the phase functions f and g, associated Laguerre
polynomials and Abel summation.

``f(t) = (e^{it} - 1) / (it)`` and ``g(t) = (e^{it} - 1 - it) / t^2`` are
evaluated through their power series when ``|t| < T_SWITCH`` so that both are
accurate (and exactly ``1`` and ``-1/2``) at ``t = 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DivergentSeriesError, PreconditionError

T_SWITCH = 1e-3
_SERIES_TERMS = 8

# Abel summation schedule: r_k = 1 - 2^-k for k in ABEL_LEVELS
ABEL_LEVELS = tuple(range(4, 13))
ABEL_TAIL = 1e-18


def _unwrap(out: np.ndarray):
    return out[()] if out.ndim == 0 else out


def _series(t: np.ndarray, shift: int) -> np.ndarray:
    # sum_k (it)^k / (k + shift)!, Horner form
    acc = np.zeros_like(t, dtype=complex)
    for k in reversed(range(_SERIES_TERMS)):
        acc = acc * (1j * t) + 1.0 / math.factorial(k + shift)
    return acc


def f_series(t):
    """Branch ``sum_{k<8} (it)^k / (k+1)!`` of :func:`f_of_t`, accurate for ``|t| < T_SWITCH``."""
    return _unwrap(_series(np.asarray(t, dtype=float), 1))


def g_series(t):
    """Branch ``-sum_{k<8} (it)^k / (k+2)!`` of :func:`g_of_t`."""
    return _unwrap(-_series(np.asarray(t, dtype=float), 2))


def f_direct(t):
    """Branch ``expm1(it) / (it)`` of :func:`f_of_t`; undefined at ``t = 0``."""
    t = np.asarray(t, dtype=float)
    return _unwrap(np.expm1(1j * t) / (1j * t))


def g_direct(t):
    """Branch ``(expm1(it) - it) / t^2`` of :func:`g_of_t`; undefined at ``t = 0``."""
    t = np.asarray(t, dtype=float)
    return _unwrap((np.expm1(1j * t) - 1j * t) / t**2)


def f_of_t(t):
    """``(e^{it} - 1) / (it)``, with ``f(0) = 1``."""
    t = np.asarray(t, dtype=float)
    small = np.abs(t) < T_SWITCH
    safe = np.where(small, 1.0, t)
    return _unwrap(np.where(small, _series(t, 1), np.asarray(f_direct(safe))))


def g_of_t(t):
    """``(e^{it} - (1 + it)) / t^2``, with ``g(0) = -1/2``."""
    t = np.asarray(t, dtype=float)
    small = np.abs(t) < T_SWITCH
    safe = np.where(small, 1.0, t)
    return _unwrap(np.where(small, -_series(t, 2), np.asarray(g_direct(safe))))


def abs_f_sq(t):
    """``|f(t)|^2 = (sin(t/2) / (t/2))^2`` evaluated without cancellation."""
    return np.sinc(np.asarray(t, dtype=float) / (2 * np.pi)) ** 2


@dataclass(frozen=True)
class PhaseKernelValue:
    t: float
    f: complex
    g: complex
    abs_f_sq: float


def phase_kernel(t: float) -> PhaseKernelValue:
    return PhaseKernelValue(float(t), complex(f_of_t(t)), complex(g_of_t(t)), float(abs_f_sq(t)))


def _check_laguerre_args(n, alpha):
    if n < 0 or alpha < 0:
        raise PreconditionError(f"Laguerre indices must be nonnegative, got n={n}, alpha={alpha}")


def laguerre_sequence(n_max: int, alpha: int, x) -> np.ndarray:
    """``L_0^(alpha)(x), ..., L_{n_max}^(alpha)(x)`` stacked along axis 0.

    Uses the forward recurrence
    ``(k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1}``.
    """
    _check_laguerre_args(n_max, alpha)
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 1.0 + alpha - x
    for k in range(1, n_max):
        out[k + 1] = ((2 * k + 1 + alpha - x) * out[k] - (k + alpha) * out[k - 1]) / (k + 1)
    return out


def laguerre_assoc(n: int, alpha: int, x):
    """Associated Laguerre polynomial ``L_n^(alpha)(x)`` for integer ``n, alpha >= 0``.

    >>> float(laguerre_assoc(2, 1, 2.0))  # 3 - 3x + x^2/2
    -1.0
    """
    _check_laguerre_args(n, alpha)
    x = np.asarray(x, dtype=float)
    if n == 0:
        return _unwrap(np.ones_like(x))
    prev, cur = np.ones_like(x), 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return _unwrap(np.asarray(cur))


@dataclass(frozen=True)
class LaguerreEval:
    n: int
    alpha: int
    x: float
    value: float


def laguerre_eval(n: int, alpha: int, x: float) -> LaguerreEval:
    if x < 0:
        raise PreconditionError(f"Laguerre argument must be nonnegative, got x={x}")
    return LaguerreEval(int(n), int(alpha), float(x), float(laguerre_assoc(n, alpha, x)))


def neville_at_zero(h, values) -> complex:
    """Value at ``h = 0`` of the polynomial interpolating ``values`` at nodes ``h``."""
    h = np.asarray(h, dtype=float)
    T = np.array(values, dtype=complex)
    for j in range(1, len(h)):
        T[j:] = (h[j:] * T[j - 1 : -1] - h[:-j] * T[j:]) / (h[j:] - h[:-j])
    return complex(T[-1])


def abel_sum(coefficients: Callable[[np.ndarray], np.ndarray], levels=ABEL_LEVELS) -> complex:
    """Abel sum ``lim_{r -> 1-} sum_n r^n a_n`` of a bounded sequence.

    The damped sums ``S(r_k)`` are evaluated at ``r_k = 1 - 2^-k`` for each
    ``k`` in ``levels``, each truncated once ``r^n`` drops below ``1e-18``,
    and extrapolated to ``r = 1`` by Richardson (Neville) extrapolation in
    ``h = 1 - r``.

    Parameters
    ----------
    coefficients : callable
        Maps an integer array ``n`` to the terms ``a_n``.
    """
    levels = np.asarray(levels)
    h = 2.0 ** -levels.astype(float)
    n_terms = int(math.ceil(math.log(ABEL_TAIL) / math.log1p(-h.min())))
    n = np.arange(n_terms)
    a = np.asarray(coefficients(n), dtype=complex)
    sums = [np.sum(np.exp(n * math.log1p(-hk)) * a) for hk in h]
    return neville_at_zero(h, sums)


def _is_full_turn(t: float) -> bool:
    return abs(np.expm1(1j * t)) < 1e-12


def abel_trace(t: float) -> complex:
    """Abel sum of ``sum_n e^{itn}``, i.e. the regularised ``Tr e^{itN}``.

    Raises
    ------
    DivergentSeriesError
        If ``t`` is an integer multiple of ``2 pi``.
    """
    if _is_full_turn(t):
        raise DivergentSeriesError(f"sum_n exp(i t n) is not Abel summable at t = {t} (multiple of 2 pi)")
    return abel_sum(lambda n: np.exp(1j * t * n))
