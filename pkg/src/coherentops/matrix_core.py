"""Dense complex matrix kernels shared by every operator builder.

Operators are plain ``numpy`` arrays of shape ``(D, D)`` and dtype
``complex128``. Two exponentials are provided:

* :func:`expm_skew` for anti-Hermitian generators, through the
  eigendecomposition of the Hermitian matrix ``-iX``. The result is unitary
  to rounding, which makes it the brute-force reference for every closed form.
* :func:`expm_triangular` for strictly triangular (nilpotent) generators,
  summed as the finite Taylor series.

All residuals are max-entry norms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from functools import lru_cache

import numpy as np

from ._dd import DDComplex, dd_powers, from_decimal
from .errors import PreconditionError

ComplexMatrix = np.ndarray

#: relative tolerance on ``X + X^dagger`` accepted by :func:`expm_skew`
SKEW_TOL = 1e-12

# diagonal-shift products beat BLAS matmul while the generator is this sparse
_MAX_SPARSE_DIAGONALS = 8


@dataclass(frozen=True)
class TruncationConfig:
    """Fock cutoff, verification band and default tolerance.

    Parameters
    ----------
    dim : int
        Cutoff dimension ``D``; basis states ``|0>, ..., |D-1>``.
    band : int
        Size ``B`` of the top-left block on which identities are compared.
        Must satisfy ``B <= D/2`` so that edge defects of the truncation stay
        out of the comparison.
    tol : float
        Default max-entry tolerance for band comparisons.
    """

    dim: int = 128
    band: int = 32
    tol: float = 1e-9

    def __post_init__(self):
        if self.dim < 1:
            raise PreconditionError(f"dim must be positive, got {self.dim}")
        if self.band < 1:
            raise PreconditionError(f"band must be positive, got {self.band}")
        if 2 * self.band > self.dim:
            raise PreconditionError(
                f"band {self.band} exceeds dim/2 = {self.dim / 2} (interior band rule)"
            )
        if not self.tol > 0:
            raise PreconditionError(f"tol must be positive, got {self.tol}")


def dim_of(cfg) -> int:
    """Cutoff of ``cfg``, which may be a :class:`TruncationConfig` or an int."""
    return int(getattr(cfg, "dim", cfg))


def band_of(cfg) -> int:
    """Verification band of ``cfg``; an int cutoff gets the default band, capped at ``D // 2``."""
    if hasattr(cfg, "band"):
        return int(cfg.band)
    return max(1, min(TruncationConfig.band, dim_of(cfg) // 2))


def max_entry(A) -> float:
    A = np.asarray(A)
    return float(np.abs(A).max()) if A.size else 0.0


def _as_square(X) -> np.ndarray:
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise PreconditionError(f"expected a square matrix, got shape {X.shape}")
    return X


def expm_skew(X) -> ComplexMatrix:
    """Exponential of an anti-Hermitian matrix.

    ``exp(X)`` is evaluated as ``V diag(exp(i w)) V^dagger`` where
    ``H = -iX = V diag(w) V^dagger``.

    Raises
    ------
    PreconditionError
        If ``max|X + X^dagger| > 1e-12 * max|X|``.
    """
    X = _as_square(X).astype(complex, copy=False)
    defect = max_entry(X + X.conj().T)
    scale = max_entry(X)
    if defect > SKEW_TOL * scale:
        raise PreconditionError(
            f"generator is not anti-Hermitian: max|X + X^H| = {defect:.3e} "
            f"> {SKEW_TOL:g} * max|X| = {SKEW_TOL * scale:.3e}"
        )
    H = -1j * X
    H = 0.5 * (H + H.conj().T)
    w, V = np.linalg.eigh(H)
    return (V * np.exp(1j * w)) @ V.conj().T


def _triangle_kind(X: np.ndarray) -> str:
    if not np.any(X):
        return "zero"
    if not np.any(np.tril(X)):
        return "upper"
    if not np.any(np.triu(X)):
        return "lower"
    raise PreconditionError("expm_triangular needs a strictly upper or strictly lower triangular matrix")


def _nonzero_offsets(X: np.ndarray) -> list[int]:
    D = X.shape[0]
    return [k for k in range(-(D - 1), D) if np.any(np.diagonal(X, k))]


def expm_triangular(X, dtype=None) -> ComplexMatrix:
    """Exponential of a strictly triangular matrix by its finite Taylor series.

    ``exp(X) = sum_{k<D} X^k / k!`` is exact up to rounding because ``X`` is
    nilpotent. Generators with only a few nonzero diagonals (ladder operators
    and their multiples) are multiplied by diagonal shifts instead of dense
    products.

    Parameters
    ----------
    X : array_like, shape (D, D)
    dtype : numpy dtype, optional
        Working precision; ``np.clongdouble`` is accepted.
    """
    X = _as_square(X)
    dtype = np.dtype(dtype) if dtype is not None else np.result_type(X.dtype, np.complex128)
    X = X.astype(dtype)
    D = X.shape[0]
    if _triangle_kind(X) == "zero":
        return np.eye(D, dtype=dtype)

    offsets = _nonzero_offsets(X)
    if len(offsets) == 1:
        return _expm_single_diagonal(np.diagonal(X, offsets[0]), offsets[0], D, np.eye(D, dtype=dtype))
    sparse = len(offsets) <= _MAX_SPARSE_DIAGONALS
    diagonals = [(k, np.diagonal(X, k)[None, :]) for k in offsets]

    out = np.eye(D, dtype=dtype)
    term = np.eye(D, dtype=dtype)
    for k in range(1, D):
        if sparse:
            # (term @ X)[:, j] = sum_off term[:, j - off] * X[j - off, j]
            nxt = np.zeros_like(term)
            for off, d in diagonals:
                if off > 0:
                    nxt[:, off:] += term[:, : D - off] * d
                else:
                    nxt[:, : D + off] += term[:, -off:] * d
            term = nxt / k
        else:
            term = (term @ X) / k
        if not term.any():
            break
        out += term
    return out


def _expm_single_diagonal(x, off: int, D: int, out):
    # X^k / k! lives on diagonal k*off; its entries are running products of x.
    # Works for ndarray and DDComplex values; ``out`` arrives as the identity.
    step = abs(off)
    p = None
    k = 0
    while (k + 1) * step < D:
        k += 1
        length = D - k * step
        factor = x[(k - 1) * step : (k - 1) * step + length]
        p = (factor if p is None else p[:length] * factor) / k
        idx = np.arange(length)
        if off > 0:
            out[idx, idx + k * step] = p
        else:
            out[idx + k * step, idx] = p
    return out


@lru_cache(maxsize=8)
def _series_table(dim: int) -> tuple:
    """Double-double ``sqrt((j+k)! / j!) / k!`` for ``j + k < dim``, zero elsewhere.

    These are the entries of ``a^k / k!`` (row ``j``, column ``j + k``) and
    do not depend on the exponent's coefficient, so they are tabulated once
    per cutoff with 40-digit decimal arithmetic.
    """
    with localcontext() as ctx:
        ctx.prec = 40
        table = np.full((dim, dim), Decimal(0), dtype=object)
        for j in range(dim):
            for k in range(dim - j):
                table[j, k] = (Decimal(math.comb(j + k, k)) / Decimal(math.factorial(k))).sqrt()
        hi, lo = from_decimal(table)
    hi.flags.writeable = False
    lo.flags.writeable = False
    return hi, lo


def expm_ladder(coef: complex, dim: int, raising: bool, precise: bool = False):
    """``exp(coef * a^dag)`` if ``raising`` else ``exp(coef * a)``.

    Same finite series as :func:`expm_triangular`. With ``precise=True`` the
    series entries ``coef^k sqrt((j+k)!/j!) / k!`` are formed in double-double
    arithmetic and a :class:`~coherentops._dd.DDComplex` is returned.
    """
    off = -1 if raising else 1
    if not precise:
        x = complex(coef) * np.sqrt(np.arange(1, dim, dtype=float))
        return _expm_single_diagonal(x, off, dim, np.eye(dim, dtype=complex))
    table = _series_table(dim)
    entries = dd_powers(complex(coef), dim).reshape(1, dim).scale_real(table)
    j, k = np.nonzero(np.add.outer(np.arange(dim), np.arange(dim)) < dim)
    out = DDComplex.from_complex(np.zeros((dim, dim)))
    if raising:
        out[j + k, j] = entries[j, k]
    else:
        out[j, j + k] = entries[j, k]
    return out


def band_residual(A, B_m, band: int) -> float:
    """``max |A_jk - B_jk|`` over the top-left ``band x band`` block."""
    A = np.asarray(A)
    B_m = np.asarray(B_m)
    if A.shape != B_m.shape:
        raise PreconditionError(f"dimension mismatch: {A.shape} vs {B_m.shape}")
    if band > A.shape[0]:
        raise PreconditionError(f"band {band} exceeds dimension {A.shape[0]}")
    return max_entry(A[:band, :band] - B_m[:band, :band])


def unitarity_residual(U) -> float:
    """``max |U^dagger U - I|`` over the full matrix."""
    U = _as_square(U)
    return max_entry(U.conj().T @ U - np.eye(U.shape[0]))
