"""Truncated ladder operators, su(1,1) generators and number states."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import PreconditionError
from .matrix_core import ComplexMatrix, dim_of


@dataclass(frozen=True)
class LadderSet:
    """Lowering, raising and number operators on ``span{|0>, ..., |dim-1>}``."""

    a: ComplexMatrix
    a_dag: ComplexMatrix
    n_op: ComplexMatrix
    dim: int


@dataclass(frozen=True)
class Su11Set:
    """``K+ = (a^dag)^2 / 2``, ``K- = a^2 / 2``, ``K3 = (N + 1/2) / 2``."""

    k_plus: ComplexMatrix
    k_minus: ComplexMatrix
    k3: ComplexMatrix
    dim: int


def _frozen(M: np.ndarray) -> np.ndarray:
    M.flags.writeable = False
    return M


def lowering_operator(dim: int, dtype=complex) -> np.ndarray:
    """Fresh ``a`` with ``a|n> = sqrt(n)|n-1>``, square roots taken in ``dtype``."""
    real = np.finfo(np.dtype(dtype)).dtype
    return np.diag(np.sqrt(np.arange(1, dim, dtype=real)), 1).astype(dtype)


@lru_cache(maxsize=16)
def _ladder(dim: int) -> LadderSet:
    a = lowering_operator(dim)
    a_dag = a.conj().T.copy()
    n_op = a_dag @ a
    return LadderSet(_frozen(a), _frozen(a_dag), _frozen(n_op), dim)


def build_ladder(cfg) -> LadderSet:
    """Ladder operators for the cutoff of ``cfg`` (a config or an int ``D >= 2``).

    The returned matrices are shared and read-only.

    >>> build_ladder(2).a.real
    array([[0., 1.],
           [0., 0.]])
    """
    dim = dim_of(cfg)
    if dim < 2:
        raise PreconditionError(f"ladder operators need dim >= 2, got {dim}")
    return _ladder(dim)


@lru_cache(maxsize=16)
def _su11(dim: int) -> Su11Set:
    L = _ladder(dim)
    k_plus = 0.5 * (L.a_dag @ L.a_dag)
    k_minus = 0.5 * (L.a @ L.a)
    k3 = 0.5 * (L.n_op + 0.5 * np.eye(dim))
    return Su11Set(_frozen(k_plus), _frozen(k_minus), _frozen(k3), dim)


def build_su11(cfg) -> Su11Set:
    dim = dim_of(cfg)
    if dim < 3:
        raise PreconditionError(f"su(1,1) generators need dim >= 3, got {dim}")
    return _su11(dim)


def number_state(cfg, n: int) -> np.ndarray:
    """Basis vector ``|n>`` as a complex amplitude array of length ``D``."""
    dim = dim_of(cfg)
    if not 0 <= n < dim:
        raise PreconditionError(f"number state index {n} outside [0, {dim})")
    v = np.zeros(dim, dtype=complex)
    v[n] = 1.0
    return v


def number_phases(dim: int, t: float, dtype=complex) -> np.ndarray:
    """Diagonal of ``exp(itN)``, i.e. ``exp(i t n)`` for ``n < dim``."""
    real = np.finfo(np.dtype(dtype)).dtype
    return np.exp(1j * (np.asarray(t, dtype=real) * np.arange(dim, dtype=real))).astype(dtype)
