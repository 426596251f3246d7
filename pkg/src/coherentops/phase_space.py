"""Quadrature over the complex plane and over t.

Integrals ``int F(z) d^2z / pi`` are discretised on a polar product grid:
Gauss-Laguerre in ``u = |z|^2`` (weight ``e^{-u}``) times a uniform angular
rule. Every integrand used here is ``e^{-|z|^2}`` times a polynomial in
``z, conj(z)``, so the grid is exact once it has enough nodes.

Resolution states come from the normally ordered form of ``U(z, t)|0>``.
Operators in the Glauber reconstruction are brute-force exponentials;
because ``U(r e^{i phi}, t) = e^{i phi N} U(r, t) e^{-i phi N}``, one
eigendecomposition per radius serves every angle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.special import gammaln, roots_laguerre

from .errors import DegenerateMeasureError, DivergentSeriesError, GridResolutionError, PreconditionError
from .extended import extended_exact
from .kernels import abel_trace, abs_f_sq, f_of_t, g_of_t
from .matrix_core import ComplexMatrix, band_of, dim_of, max_entry

#: |f(t)|^2 below this makes the extended measure degenerate
F_FLOOR = 1e-6
#: t-range cutoff for the t-integrated measure; e^{-T}/2 is the dropped tail mass
T_CUTOFF = 30.0


@dataclass(frozen=True)
class PolarQuadrature:
    """Product rule for ``int d^2z / pi``.

    ``radial_nodes``/``radial_weights`` integrate ``int_0^inf e^{-u} p(u) du``
    exactly for polynomials of degree ``< 2 * n_rad``; ``n_angles`` uniform
    angles integrate trigonometric polynomials of degree ``< n_angles``.
    """

    radial_nodes: np.ndarray
    radial_weights: np.ndarray
    n_angles: int

    @property
    def n_rad(self) -> int:
        return len(self.radial_nodes)

    @property
    def radii(self) -> np.ndarray:
        return np.sqrt(self.radial_nodes)

    @property
    def angles(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n_angles) / self.n_angles

    @property
    def nodes(self) -> np.ndarray:
        """Complex nodes, shape ``(n_rad, n_angles)``."""
        return self.radii[:, None] * np.exp(1j * self.angles)[None, :]

    @property
    def plain_weights(self) -> np.ndarray:
        """Per-radius weights for an integrand given with its Gaussian, ``w_i e^{u_i} / M``."""
        return np.exp(self.radial_nodes + np.log(self.radial_weights)) / self.n_angles

    def integrate(self, func) -> complex:
        """``int func(z) d^2z / pi`` for a vectorised ``func`` that includes its Gaussian."""
        vals = func(self.nodes)
        return complex(np.sum(self.plain_weights[:, None] * vals))


def build_polar_grid(n_rad: int, n_angles: int) -> PolarQuadrature:
    if n_rad < 1 or n_angles < 3:
        raise PreconditionError(f"need n_rad >= 1 and n_angles >= 3, got {n_rad}, {n_angles}")
    u, w = roots_laguerre(n_rad)
    u.flags.writeable = False
    w.flags.writeable = False
    return PolarQuadrature(u, w, int(n_angles))


def _require_resolved(grid: PolarQuadrature, n_rad: int, n_angles: int, what: str) -> None:
    if grid.n_rad < n_rad or grid.n_angles < n_angles:
        raise GridResolutionError(
            f"{what} needs n_rad >= {n_rad} and n_angles >= {n_angles}; "
            f"grid has n_rad = {grid.n_rad}, n_angles = {grid.n_angles}"
        )


def _measure_factor(t: float, f_floor: float) -> complex:
    """``f(t)``, after checking the measure weight ``|f(t)|^2`` against the floor."""
    fsq = float(abs_f_sq(t))
    if fsq < f_floor:
        raise DegenerateMeasureError(f"|f(t)|^2 = {fsq:.3e} < {f_floor:g} at t = {t}")
    return complex(f_of_t(t))


def _radial_operators(grid: PolarQuadrature, t: float, cfg, f: complex):
    """Yield ``(weight, U(z_r, t))`` with nodes placed in ``w = f z``.

    ``z_r = |w_r| / f`` is the node on the ray ``arg w = 0``; rotating by the
    angle ``phi`` multiplies entry ``(j, k)`` by ``e^{i phi (j - k)}``.
    """
    for r, weight in zip(grid.radii, grid.plain_weights):
        yield weight, extended_exact(r / f, t, cfg)


def extended_state_band(z: complex, t: float, band: int) -> np.ndarray:
    """Leading ``band`` amplitudes of ``|z, t> = U(z, t)|0>`` from the normal ordering.

    ``e^{itN}`` fixes the vacuum, so ``|z, t> = e^{g|z|^2} e^{w a^dag}|0>``
    with ``w = f z``, whose amplitudes are ``e^{g|z|^2} w^n / sqrt(n!)``.
    Unlike a truncated exponential this stays exact when ``|z|`` is large.
    """
    z = complex(z)
    w = complex(f_of_t(t)) * z
    n = np.arange(band)
    lead = complex(g_of_t(t)) * abs(z) ** 2
    if w == 0:
        return np.where(n == 0, np.exp(lead), 0).astype(complex)
    return np.exp(lead + n * np.log(w) - 0.5 * gammaln(n + 1))


def _resolution_sum(grid: PolarQuadrature, t: float, band: int, f: complex) -> np.ndarray:
    total = np.zeros((band, band), dtype=complex)
    rot = np.exp(1j * np.outer(grid.angles, np.arange(band)))  # (M, band)
    for r, weight in zip(grid.radii, grid.plain_weights):
        states = rot * extended_state_band(r / f, t, band)[None, :]
        total += weight * (states.T @ states.conj())
    return total


def resolution_residual_coherent(cfg, grid: PolarQuadrature, band: int | None = None) -> float:
    """``max |sum_nodes weight |z><z| - I|`` over the band."""
    band = band_of(cfg) if band is None else band
    _require_resolved(grid, band + 1, 2 * band + 1, "resolution of unity")
    return max_entry(_resolution_sum(grid, 0.0, band, 1.0) - np.eye(band))


def resolution_residual_extended(t: float, cfg, grid: PolarQuadrature, band: int | None = None,
                                 f_floor: float = F_FLOOR) -> float:
    """Residual of ``int |f(t)|^2 d^2z/pi |z,t><z,t| = 1`` over the band.

    Nodes are placed in ``w = f(t) z``, which absorbs the ``|f(t)|^2`` Jacobian.
    """
    band = band_of(cfg) if band is None else band
    _require_resolved(grid, band + 1, 2 * band + 1, "resolution of unity")
    f = _measure_factor(t, f_floor)
    return max_entry(_resolution_sum(grid, t, band, f) - np.eye(band))


@dataclass(frozen=True)
class LineQuadratureT:
    """Rule for ``int e^{-|t|}/2 dt`` over ``[-T, T]`` minus windows around ``2 pi k``.

    ``defect_bound`` is the exact ``e^{-|t|}/2`` mass that the rule leaves
    out: the excluded windows plus both tails beyond ``T``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    windows: tuple = field(default_factory=tuple)
    cutoff: float = T_CUTOFF

    @property
    def excluded_mass(self) -> float:
        return sum(_half_exp_mass(lo, hi) for lo, hi in self.windows)

    @property
    def tail_mass(self) -> float:
        return math.exp(-self.cutoff)

    @property
    def defect_bound(self) -> float:
        return self.excluded_mass + self.tail_mass


def _half_exp_mass(lo: float, hi: float) -> float:
    """``int_lo^hi e^{-|t|}/2 dt`` for an interval not straddling 0."""
    a, b = sorted((abs(lo), abs(hi)))
    return 0.5 * (math.exp(-a) - math.exp(-b))


def build_t_grid(cutoff: float = T_CUTOFF, window: float = 0.05, nodes_per_interval: int = 12,
                 f_floor: float = F_FLOOR) -> LineQuadratureT:
    """Piecewise Gauss-Legendre rule for ``e^{-|t|}/2`` avoiding the zeros of ``f``.

    Windows of half-width ``window`` (widened if needed so that
    ``|f|^2 >= f_floor`` outside them) are cut around every ``2 pi k``,
    ``k != 0``, inside ``[-cutoff, cutoff]``.
    """
    x, w = np.polynomial.legendre.leggauss(nodes_per_interval)
    windows = []
    k = 1
    while 2 * np.pi * k - window < cutoff:
        c = 2 * np.pi * k
        # near c, |f|^2 ~ ((t - c)/c)^2
        half = max(window, c * math.sqrt(f_floor) * 1.01)
        windows += [(c - half, min(c + half, cutoff)), (-min(c + half, cutoff), -(c - half))]
        k += 1
    cuts = sorted({-cutoff, 0.0, cutoff, *(e for win in windows for e in win)})
    blocked = [(lo, hi) for lo, hi in windows]
    nodes, weights = [], []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (lo + hi)
        if any(a <= mid <= b for a, b in blocked) or hi <= lo:
            continue
        t = mid + 0.5 * (hi - lo) * x
        nodes.append(t)
        weights.append(0.5 * (hi - lo) * w * 0.5 * np.exp(-np.abs(t)))
    return LineQuadratureT(np.concatenate(nodes), np.concatenate(weights), tuple(sorted(windows)), cutoff)


def resolution_residual_t_integrated(cfg, grid_z: PolarQuadrature, grid_t: LineQuadratureT,
                                     band: int | None = None, f_floor: float = F_FLOOR) -> float:
    """Residual of ``int e^{-|t|}/2 dt int |f(t)|^2 d^2z/pi |z,t><z,t| = 1`` over the band.

    Compare against ``grid_t.defect_bound``: the excluded ``t`` mass is
    missing from the sum by construction.
    """
    band = band_of(cfg) if band is None else band
    _require_resolved(grid_z, band + 1, 2 * band + 1, "resolution of unity")
    total = np.zeros((band, band), dtype=complex)
    for t, wt in zip(grid_t.nodes, grid_t.weights):
        f = _measure_factor(t, f_floor)
        total += wt * _resolution_sum(grid_z, t, band, f)
    return max_entry(total - np.eye(band))


def glauber_reconstruct(A, cfg, grid: PolarQuadrature, t: float = 0.0, band: int | None = None,
                        f_floor: float = F_FLOOR) -> ComplexMatrix:
    """``int |f(t)|^2 d^2z/pi Tr[A U(z,t)^dagger] U(z,t)`` on the quadrature grid.

    ``A`` is a ``D x D`` operator that vanishes outside its leading ``band``
    block. Only that block of ``U`` enters the characteristic function, and
    only the leading block of the result is meaningful; accuracy needs
    ``n_rad >= 2B + 2`` and ``n_angles >= 4B + 2``.

    ``U(z, t)`` is exponentiated at cutoff ``D`` for every node ``z = w / f``.
    Its orbit reaches amplitude ``|w| / |sin(t/2)|``, so ``D`` must grow
    as ``t`` approaches a full turn.
    """
    dim = dim_of(cfg)
    band = band_of(cfg) if band is None else band
    A = np.asarray(A, dtype=complex)
    if A.shape != (dim, dim):
        raise PreconditionError(f"operator has shape {A.shape}, expected {(dim, dim)}")
    outside = A.copy()
    outside[:band, :band] = 0
    if np.any(outside):
        raise PreconditionError(f"operator is not supported on the leading {band} x {band} block")
    _require_resolved(grid, 2 * band + 2, 4 * band + 2, "Glauber reconstruction")
    f = _measure_factor(t, f_floor)

    idx = np.arange(dim)
    rel = idx[:, None] - idx[None, :]
    Ab = A[:band, :band]
    out = np.zeros((dim, dim), dtype=complex)
    for weight, U in _radial_operators(grid, t, cfg, f):
        for phi in grid.angles:
            Uphi = U * np.exp(1j * phi * rel)
            chi = np.sum(Ab * Uphi[:band, :band].conj())  # Tr[A U^dagger]
            out += (weight * chi) * Uphi
    return out


def trace_limit_probe(sigma: float, t: float) -> tuple[complex, complex]:
    """Pair ``Tr U(z, t)`` with the Gaussian ``e^{-|z|^2/sigma^2}`` over ``d^2z/pi``.

    Returns ``(probe, target)``. The probe is
    ``sigma^2 t / ((t + i sigma^2)(1 - e^{it}))``; the target is the same
    pairing for ``Tr U(z, 0) = pi delta^2(z)``, which is ``1``.
    """
    _check_probe_args(sigma, t)
    s2 = sigma**2
    probe = s2 * t / ((t + 1j * s2) * (1 - np.exp(1j * t)))
    return complex(probe), 1.0 + 0j


def trace_limit_probe_numeric(sigma: float, t: float) -> complex:
    """The same pairing by numerical quadrature.

    The radial integral ``int_0^inf e^{-u/sigma^2} e^{-iu/t} du`` is done by
    Fourier-weighted adaptive quadrature and ``Tr e^{itN}`` by
    :func:`~coherentops.kernels.abel_trace`.
    """
    _check_probe_args(sigma, t)
    decay = lambda u: math.exp(-u / sigma**2)  # noqa: E731
    cos_part, _ = integrate.quad(decay, 0, np.inf, weight="cos", wvar=1 / t)
    sin_part, _ = integrate.quad(decay, 0, np.inf, weight="sin", wvar=1 / t)
    return (cos_part - 1j * sin_part) * abel_trace(t)


def _check_probe_args(sigma: float, t: float) -> None:
    if not sigma > 0:
        raise PreconditionError(f"sigma must be positive, got {sigma}")
    if t == 0 or abs(np.expm1(1j * t)) < 1e-12:
        raise DivergentSeriesError(f"Tr U(z, t) is not defined at t = {t} (multiple of 2 pi)")


__all__ = [
    "F_FLOOR",
    "LineQuadratureT",
    "PolarQuadrature",
    "T_CUTOFF",
    "build_polar_grid",
    "build_t_grid",
    "extended_state_band",
    "glauber_reconstruct",
    "resolution_residual_coherent",
    "resolution_residual_extended",
    "resolution_residual_t_integrated",
    "trace_limit_probe",
    "trace_limit_probe_numeric",
]
