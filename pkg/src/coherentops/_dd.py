"""Double-double complex arrays.

Each real component is an unevaluated sum ``hi + lo`` of two float64 arrays,
giving about 32 significant digits. Only the handful of operations needed to
form ladder exponentials and one matrix product are provided; the algorithms
are the classical error-free transformations of Dekker and Knuth.
"""
from __future__ import annotations

from decimal import Decimal

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _fast_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _add(x, y):
    s, e = _two_sum(x[0], y[0])
    return _fast_two_sum(s, e + (x[1] + y[1]))


def _sub(x, y):
    return _add(x, (-y[0], -y[1]))


def _mul(x, y):
    p, e = _two_prod(x[0], y[0])
    return _fast_two_sum(p, e + (x[0] * y[1] + x[1] * y[0]))


def from_decimal(values) -> tuple:
    """``(hi, lo)`` arrays from an array-like of :class:`decimal.Decimal`."""
    flat = np.asarray(values, dtype=object)
    hi = np.array([float(v) for v in flat.ravel()]).reshape(flat.shape)
    lo = np.array([float(v - Decimal(h)) for v, h in zip(flat.ravel(), hi.ravel())]).reshape(flat.shape)
    return hi, lo


class DDComplex:
    """Array of complex double-double numbers."""

    __slots__ = ("re", "im")
    __array_priority__ = 1000

    def __init__(self, re, im):
        self.re = re
        self.im = im

    @classmethod
    def from_complex(cls, z) -> "DDComplex":
        z = np.asarray(z, dtype=complex)
        zero = np.zeros(z.shape)
        return cls((z.real.copy(), zero), (z.imag.copy(), zero.copy()))

    @property
    def shape(self):
        return self.re[0].shape

    def _coerce(self, other) -> "DDComplex":
        return other if isinstance(other, DDComplex) else DDComplex.from_complex(other)

    def __getitem__(self, idx) -> "DDComplex":
        return DDComplex((self.re[0][idx], self.re[1][idx]), (self.im[0][idx], self.im[1][idx]))

    def __setitem__(self, idx, value) -> None:
        value = self._coerce(value)
        for mine, theirs in ((self.re, value.re), (self.im, value.im)):
            mine[0][idx] = theirs[0]
            mine[1][idx] = theirs[1]

    def __add__(self, other) -> "DDComplex":
        other = self._coerce(other)
        return DDComplex(_add(self.re, other.re), _add(self.im, other.im))

    __radd__ = __add__

    def __neg__(self) -> "DDComplex":
        return DDComplex((-self.re[0], -self.re[1]), (-self.im[0], -self.im[1]))

    def __sub__(self, other) -> "DDComplex":
        return self + (-self._coerce(other))

    def __mul__(self, other) -> "DDComplex":
        other = self._coerce(other)
        re = _sub(_mul(self.re, other.re), _mul(self.im, other.im))
        im = _add(_mul(self.re, other.im), _mul(self.im, other.re))
        return DDComplex(re, im)

    __rmul__ = __mul__

    def scale_real(self, x) -> "DDComplex":
        """Multiply by a real double-double array ``x = (hi, lo)`` (broadcasting)."""
        return DDComplex(_mul(self.re, x), _mul(self.im, x))

    def reshape(self, *shape) -> "DDComplex":
        return DDComplex(
            (self.re[0].reshape(*shape), self.re[1].reshape(*shape)),
            (self.im[0].reshape(*shape), self.im[1].reshape(*shape)),
        )

    def to_complex(self) -> np.ndarray:
        return (self.re[0] + self.re[1]) + 1j * (self.im[0] + self.im[1])


def dd_powers(q: complex, n: int) -> DDComplex:
    """``q**k`` for ``k = 0, ..., n-1`` by binary powering in double-double."""
    k = np.arange(n)
    out = DDComplex.from_complex(np.ones(n))
    base = DDComplex.from_complex(np.full(n, complex(q)))
    while np.any(k):
        odd = (k & 1).astype(bool)
        if odd.any():
            prod = out * base
            out[odd] = prod[odd]
        k = k >> 1
        base = base * base
    return out


def _pad_pow2(x: np.ndarray, axis: int) -> np.ndarray:
    n = x.shape[axis]
    target = 1 << (n - 1).bit_length()
    if target == n:
        return x
    pad = [(0, 0)] * x.ndim
    pad[axis] = (0, target - n)
    return np.pad(x, pad)


def _cascade_sum(p: np.ndarray, err: np.ndarray):
    """Sum ``p`` over axis 1 with error-free pairwise two-sums (``err`` collects the rest)."""
    x = _pad_pow2(p, 1)
    while x.shape[1] > 1:
        half = x.shape[1] // 2
        x, e = _two_sum(x[:, :half], x[:, half:])
        err = err + e.sum(axis=1)
    return _fast_two_sum(x[:, 0], err)


def _real_dot_terms(a, b):
    """Exact leading products and small corrections of ``a[i, k] * b[k, j]``.

    ``a`` and ``b`` are ``(hi, lo)`` pairs of 2-d arrays; the outputs have
    shape ``(n, k, m)``.
    """
    ah, al = a[0][:, :, None], a[1][:, :, None]
    bh, bl = b[0][None, :, :], b[1][None, :, :]
    ahh, ahl = _split(ah)
    bhh, bhl = _split(bh)
    p = ah * bh
    e = ((ahh * bhh - p) + ahh * bhl + ahl * bhh) + ahl * bhl
    return p, e + (ah * bl + al * bh)


def dd_matmul(A: DDComplex, B: DDComplex) -> DDComplex:
    """``A @ B`` for 2-d double-double arrays.

    Each output entry is a compensated dot product: products are split
    exactly into ``hi + err`` and the leading parts are summed with
    error-free transformations, so the result is as accurate as if the
    sum had been carried in twice the working precision.
    """
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"matmul shape mismatch {A.shape} @ {B.shape}")
    rr_p, rr_e = _real_dot_terms(A.re, B.re)
    ii_p, ii_e = _real_dot_terms(A.im, B.im)
    ri_p, ri_e = _real_dot_terms(A.re, B.im)
    ir_p, ir_e = _real_dot_terms(A.im, B.re)
    re = _cascade_sum(np.concatenate([rr_p, -ii_p], axis=1), (rr_e - ii_e).sum(axis=1))
    im = _cascade_sum(np.concatenate([ri_p, ir_p], axis=1), (ri_e + ir_e).sum(axis=1))
    return DDComplex(re, im)
