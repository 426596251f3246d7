"""Verification suites, JSON reports and CSV tables behind the command line.

Every check reduces to one nonnegative residual compared with a tolerance.
Samples of ``(z, t)`` come from a seeded generator, so a fixed
:class:`SuiteConfig` always produces the same report bytes; wall times are
recorded only on request.
"""
from __future__ import annotations

import csv
import json
import time
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import coherent as co
from . import extended as ex
from . import kernels as kn
from . import phase_space as ps
from .errors import DivergentSeriesError, PreconditionError
from .matrix_core import TruncationConfig, band_residual, max_entry, unitarity_residual
from .oscillator import build_ladder, build_su11

SCHEMA_VERSION = 1
SUITES = ("algebra", "coherent", "extended", "quadrature", "trace", "glauber", "squeeze")

#: ``|probe(1, 1/16) - 1|`` quoted to four digits; the closed form gives 0.031191
PROBE_DEVIATION_AT_SIXTEENTH = 0.0312


class UsageError(PreconditionError):
    """Bad command-line or suite configuration (exit status 2)."""


@dataclass(frozen=True)
class SuiteConfig:
    """What to run and at which sizes.

    ``tol_overrides`` maps a check name to a replacement tolerance.
    """

    dim: int = 128
    band: int = 32
    tol_overrides: dict = field(default_factory=dict)
    samples: int = 50
    seed: int = 20240611
    z_radius: float = 2.0
    t_range: tuple = (-6.0, 6.0)
    suites: tuple = SUITES

    def __post_init__(self):
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise UsageError(f"unknown suite(s) {', '.join(unknown)}; valid suites: {', '.join(SUITES)}")
        if self.samples < 1 or self.z_radius <= 0 or self.t_range[0] >= self.t_range[1]:
            raise UsageError("samples and z_radius must be positive and t_range increasing")
        for name, tol in self.tol_overrides.items():
            if not tol > 0:
                raise UsageError(f"tolerance for {name} must be positive, got {tol}")
        try:
            self.truncation
        except PreconditionError as exc:
            raise UsageError(str(exc)) from exc

    @property
    def truncation(self) -> TruncationConfig:
        return TruncationConfig(self.dim, self.band)

    def to_json(self) -> dict:
        d = asdict(self)
        d["t_range"] = list(self.t_range)
        d["suites"] = list(self.suites)
        d["tol_overrides"] = dict(sorted(self.tol_overrides.items()))
        return d


@dataclass(frozen=True)
class CheckResult:
    name: str
    ref: str
    residual: float
    tol: float
    seconds: float | None = None

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tol)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ref": self.ref,
            "residual": float(self.residual),
            "tol": float(self.tol),
            "pass": self.passed,
            "seconds": self.seconds,
        }


@dataclass(frozen=True)
class VerificationReport:
    config: SuiteConfig
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config.to_json(),
            "checks": [c.to_json() for c in self.checks],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False) + "\n"

    def get(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


# -- sampling ---------------------------------------------------------------


def sample_points(cfg: SuiteConfig, stream: str) -> tuple[np.ndarray, np.ndarray]:
    """``cfg.samples`` pairs ``(z, t)``: ``z`` uniform on the disc, ``t`` uniform on ``t_range``.

    Each suite draws from its own stream so that selecting suites does not
    shift the samples of the others.
    """
    key = [cfg.seed] + [ord(c) for c in stream]
    rng = np.random.default_rng(key)
    r = cfg.z_radius * np.sqrt(rng.random(cfg.samples))
    z = r * np.exp(2j * np.pi * rng.random(cfg.samples))
    t = rng.uniform(*cfg.t_range, cfg.samples)
    return z, t


# -- suites -----------------------------------------------------------------

Check = tuple  # (name, ref, tol, thunk)


def _algebra(cfg: SuiteConfig) -> list[Check]:
    tc = cfg.truncation
    D, B = tc.dim, tc.band

    def ladder():
        L = build_ladder(tc)
        comm = L.a @ L.a_dag - L.a_dag @ L.a
        edge = abs(comm[D - 1, D - 1] - (1 - D))
        return max(band_residual(comm, np.eye(D), D - 1), edge)

    def su11():
        S = build_su11(tc)
        res = []
        for lhs, rhs in (
            (S.k3 @ S.k_plus - S.k_plus @ S.k3, S.k_plus),
            (S.k3 @ S.k_minus - S.k_minus @ S.k3, -S.k_minus),
            (S.k_minus @ S.k_plus - S.k_plus @ S.k_minus, 2 * S.k3),
        ):
            res.append(band_residual(lhs, rhs, B))
        return max(res)

    def phase_kernels():
        t = np.random.default_rng([cfg.seed, 1]).uniform(-10, 10, 1000)
        f, g = kn.f_of_t(t), kn.g_of_t(t)
        sinc = np.abs(np.sin(t / 2) / (t / 2))
        exact = max(abs(kn.f_of_t(0.0) - 1), abs(kn.g_of_t(0.0) + 0.5))
        return max(np.abs(np.abs(f) - sinc).max(), np.abs(kn.abs_f_sq(t) + 2 * g.real).max(), exact)

    def laguerre():
        from scipy.special import eval_genlaguerre

        worst = 0.0
        for alpha in range(0, 6):
            for x in (0.0, 0.5, 1.0, 4.0, 25.0):
                seq = kn.laguerre_sequence(40, alpha, x)
                ref = eval_genlaguerre(np.arange(41), alpha, x)
                worst = max(worst, np.max(np.abs(seq - ref) / np.maximum(1, np.abs(ref))))
        return worst

    ref = "ladder commutator [a, a^dag] = 1 with the truncation edge defect"
    return [
        ("algebra.ladder", ref, 1e-12, ladder),
        ("algebra.su11", "su(1,1) commutators of K+, K-, K3 on the interior", 1e-12, su11),
        ("algebra.phase_kernels", "|f(t)| = |sin(t/2)/(t/2)|, |f|^2 = -(g + conj g)", 1e-12, phase_kernels),
        ("algebra.laguerre", "associated Laguerre recurrence vs scipy", 1e-10, laguerre),
    ]


def _max_over(samples: Iterable, fn: Callable) -> float:
    return max((fn(*s) for s in samples), default=0.0)


def _matrix_element_residual(z, t, n_max=20) -> float:
    tc = TruncationConfig(128, 32)
    if t is None:
        closed = co.coherent_matrix_block(z, n_max, n_max)
        oracle = co.displacement_exact(z, tc)
    else:
        closed = ex.extended_matrix_block(z, t, n_max, n_max)
        oracle = ex.extended_exact(z, t, tc)
    return max_entry(closed - oracle[: n_max + 1, : n_max + 1])


def _coherent(cfg: SuiteConfig) -> list[Check]:
    tc = cfg.truncation
    zs, _ = sample_points(cfg, "coherent")
    ws, _ = sample_points(cfg, "coherent.w")

    def disentangle(form):
        def run():
            return _max_over(
                ((z,) for z in zs),
                lambda z: band_residual(co.displacement_disentangled(z, tc, form), co.displacement_exact(z, tc), tc.band),
            )
        return run

    def commutation():
        def one(z, w):
            lhs = co.displacement_exact(z, tc) @ co.displacement_exact(w, tc)
            rhs = co.commutation_phase(z, w) * (co.displacement_exact(w, tc) @ co.displacement_exact(z, tc))
            return band_residual(lhs, rhs, tc.band)
        return _max_over(zip(zs, ws), one)

    def elements():
        return _max_over(((z, None) for z in zs), _matrix_element_residual)

    return [
        ("coherent.disentangle.normal", "coherent operator, normally ordered product", tc.tol, disentangle("normal")),
        ("coherent.disentangle.antinormal", "coherent operator, antinormally ordered product", tc.tol,
         disentangle("antinormal")),
        ("coherent.matrix_elements", "coherent operator matrix elements via Laguerre polynomials", tc.tol, elements),
        ("coherent.commutation", "U(z)U(w) = e^{z conj(w) - conj(z) w} U(w)U(z)", tc.tol, commutation),
    ]


def _extended(cfg: SuiteConfig) -> list[Check]:
    tc = cfg.truncation
    zs, ts = sample_points(cfg, "extended")
    ws, ss = sample_points(cfg, "extended.w")
    near = 2 * np.pi + np.array([-1e-4, -3e-5, 0.0, 3e-5, 1e-4])

    def disentangle(form):
        def run():
            return _max_over(
                zip(zs, ts),
                lambda z, t: band_residual(ex.extended_disentangled(z, t, tc, form), ex.extended_exact(z, t, tc), tc.band),
            )
        return run

    def elements():
        extra = [(zs[k % len(zs)], sign * t) for k, t in enumerate(near) for sign in (1, -1)]
        return _max_over(list(zip(zs, ts)) + extra, _matrix_element_residual)

    def commutation():
        return _max_over(zip(zs, ts, ws, ss), lambda z, t, w, s: ex.extended_commutation_residual(z, t, w, s, tc))

    def decomposition():
        big = TruncationConfig(2 * tc.dim, min(16, tc.band))
        rng = np.random.default_rng([cfg.seed, 2])
        pts = [(np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()), rng.uniform(0.5, 3.0)) for _ in range(10)]
        return _max_over(
            pts,
            lambda z, t: band_residual(ex.conjugated_decomposition(z, t, big), ex.extended_exact(z, t, big), big.band),
        )

    def small_t_limit():
        # U(z, t) - U(z) is first order in t N, so z = 0 is the hardest point
        return _max_over(
            ((z,) for z in [0j, *zs[:10]]),
            lambda z: band_residual(ex.extended_exact(z, 1e-6, tc), co.displacement_exact(z, tc), tc.band),
        )

    def full_turn():
        def one(z, k):
            t = 2 * np.pi * k
            return band_residual(ex.extended_exact(z, t, tc), ex.full_turn_value(z, t) * np.eye(tc.dim), tc.band)
        return _max_over(((z, k) for z, k in zip(zs[:6], (1, -1, 2, -2, 1, -1))), one)

    ref_u = "U(z,t) = e^{g|z|^2} e^{f z a^dag} e^{itN} e^{-f conj(z) a}"
    ref_a = "U(z,t) = e^{-conj(g)|z|^2} e^{-conj(f) conj(z) a} e^{itN} e^{conj(f) z a^dag}"
    return [
        ("extended.disentangle.normal", ref_u, tc.tol, disentangle("normal")),
        ("extended.disentangle.antinormal", ref_a, tc.tol, disentangle("antinormal")),
        ("extended.matrix_elements", "matrix elements through w = f(t) z, including t near 2 pi", tc.tol, elements),
        ("extended.commutation", "U(z,t)U(w,s) = phase * U(w e^{it}, s) U(z e^{-is}, t)", tc.tol, commutation),
        ("extended.decomposition", "U(z,t) as e^{itN} conjugated by a displacement by iz/t", 1e-6, decomposition),
        ("extended.small_t_limit", "U(z, 1e-6) against U(z)", 1e-5, small_t_limit),
        ("extended.full_turn", "U(z, 2 pi k) = e^{-i|z|^2/t} on the band", tc.tol, full_turn),
    ]


def _quadrature(cfg: SuiteConfig) -> list[Check]:
    B = min(16, cfg.band)
    tc = TruncationConfig(cfg.dim, B)
    grid = ps.build_polar_grid(B + 4, 2 * B + 8)
    B8 = min(8, cfg.band)
    grid_t = ps.build_t_grid()
    bound = grid_t.defect_bound + 1e-6
    return [
        ("quadrature.coherent", "resolution of unity with d^2z/pi", 1e-10,
         lambda: ps.resolution_residual_coherent(tc, grid)),
        ("quadrature.extended", "resolution of unity with |f(t)|^2 d^2z/pi at t = 1.7", 1e-9,
         lambda: ps.resolution_residual_extended(1.7, tc, grid)),
        ("quadrature.t_integrated", "resolution of unity with e^{-|t|}/2 dt |f(t)|^2 d^2z/pi", bound,
         lambda: ps.resolution_residual_t_integrated(TruncationConfig(cfg.dim, B8), ps.build_polar_grid(B8 + 2, 2 * B8 + 2),
                                                     grid_t)),
    ]


def _trace(cfg: SuiteConfig) -> list[Check]:
    ladder = (0.5, 0.25, 0.125, 0.0625)

    def abel():
        return max(
            abs(ex.extended_trace_abel(z, t) - ex.extended_trace_closed(z, t))
            for z in (0.0, 1.0)
            for t in (1.0, 2.5, np.pi)
        )

    def deviations():
        return [abs(ps.trace_limit_probe(1.0, t)[0] - 1) for t in ladder]

    def monotone():
        d = deviations()
        return max(b / a for a, b in zip(d[:-1], d[1:]))

    def value():
        return abs(deviations()[-1] - PROBE_DEVIATION_AT_SIXTEENTH)

    def numeric():
        return max(abs(ps.trace_limit_probe_numeric(1.0, t) - ps.trace_limit_probe(1.0, t)[0]) for t in ladder)

    return [
        ("trace.abel", "Abel-summed trace e^{-i|z|^2/t} / (1 - e^{it})", 1e-6, abel),
        # strictly decreasing means every ratio of consecutive deviations is below 1
        ("trace.limit_monotone", "Gaussian pairing of Tr U(z,t) approaches 1 as t -> 0", 1 - 1e-9, monotone),
        ("trace.limit_value", "|probe - 1| at sigma = 1, t = 1/16", 1e-4, value),
        ("trace.limit_quadrature", "closed-form probe against numerical quadrature", 1e-4, numeric),
    ]


def _glauber(cfg: SuiteConfig) -> list[Check]:
    B = min(8, cfg.band)
    tc = TruncationConfig(cfg.dim, B)
    grid = ps.build_polar_grid(2 * B + 2, 4 * B + 2)
    A = np.zeros((cfg.dim, cfg.dim), dtype=complex)
    A[1, 2] = A[2, 1] = 1.0

    def run(t):
        return lambda: float(np.linalg.norm(ps.glauber_reconstruct(A, tc, grid, t=t)[:B, :B] - A[:B, :B]))

    return [
        ("glauber.coherent", "operator from its characteristic function, t = 0", 1e-6, run(0.0)),
        ("glauber.extended", "operator from its characteristic function, t = 1", 1e-6, run(1.0)),
    ]


def _squeeze(cfg: SuiteConfig) -> list[Check]:
    tc = cfg.truncation
    zs, ts = sample_points(cfg, "squeeze")
    ws, ss = sample_points(cfg, "squeeze.w")
    # |z| < 1 keeps the su(1,1) orbit inside the cutoff
    zs, ws = zs[:10] * 0.45, ws[:10] * 0.45

    def unitary():
        return _max_over(zip(zs, ts), lambda z, t: unitarity_residual(ex.squeeze_extended(z, t, tc)))

    def vacuum():
        return _max_over(
            ((s,) for s in ss),
            lambda s: max_entry(ex.squeeze_extended(0.0, s, tc) - np.diag(ex.squeeze_vacuum_phases(s, tc.dim))),
        )

    def product():
        return _max_over(zip(zs, ts, ws, ss), lambda z, t, w, s: unitarity_residual(ex.product_uv(z, t, w, s, tc)))

    return [
        ("squeeze.unitarity", "V(z,t) = exp(z K+ - conj(z) K- + i t K3) is unitary", 1e-11 * tc.dim, unitary),
        ("squeeze.vacuum_phases", "V(0,s) = diag e^{is(n/2 + 1/4)}", 1e-12, vacuum),
        ("squeeze.product_unitarity", "U(z,t) V(w,s) is unitary", 1e-10, product),
    ]


_BUILDERS = {
    "algebra": _algebra,
    "coherent": _coherent,
    "extended": _extended,
    "quadrature": _quadrature,
    "trace": _trace,
    "glauber": _glauber,
    "squeeze": _squeeze,
}


def check_names(suites: Iterable[str] = SUITES) -> list[str]:
    """Names of every check in ``suites``, without running anything."""
    cfg = SuiteConfig(suites=tuple(suites))
    return [name for suite in sorted(cfg.suites) for name, *_ in _BUILDERS[suite](cfg)]


def run_suites(cfg: SuiteConfig, timings: bool = False) -> VerificationReport:
    """Run the selected suites in suite-name order.

    ``seconds`` is ``None`` unless ``timings`` is set, which keeps reports
    from identical configurations byte-identical.
    """
    known = set()
    results = []
    for suite in sorted(set(cfg.suites)):
        for name, ref, tol, thunk in _BUILDERS[suite](cfg):
            known.add(name)
            tol = cfg.tol_overrides.get(name, tol)
            start = time.perf_counter()
            residual = float(thunk())
            elapsed = round(time.perf_counter() - start, 3) if timings else None
            results.append(CheckResult(name, ref, residual, tol, elapsed))
    unknown = sorted(set(cfg.tol_overrides) - known)
    if unknown:
        raise UsageError(f"tolerance override for unknown check(s): {', '.join(unknown)}")
    return VerificationReport(cfg, tuple(results))


# -- tables -----------------------------------------------------------------

TABLE_COLUMNS = ("n", "m", "re_closed", "im_closed", "re_oracle", "im_oracle", "abs_err")
PROBE_COLUMNS = ("t", "re_probe", "im_probe", "abs_dev_from_1")
MAX_TABLE_INDEX = 64


def emit_matrix_table(kind: str, n_max: int, m_max: int, z: complex, t: float | None, path, dim: int = 128) -> int:
    """Write closed-form and brute-force matrix elements side by side as CSV.

    Returns the number of data rows.
    """
    if kind not in ("coherent", "extended"):
        raise UsageError(f"kind must be 'coherent' or 'extended', got {kind!r}")
    if not (0 <= n_max <= MAX_TABLE_INDEX and 0 <= m_max <= MAX_TABLE_INDEX):
        raise UsageError(f"indices must lie in [0, {MAX_TABLE_INDEX}], got n_max={n_max}, m_max={m_max}")
    t = 0.0 if t is None else float(t)
    if kind == "coherent":
        closed = co.coherent_matrix_block(z, n_max, m_max)
        oracle = co.displacement_exact(z, dim)
    else:
        closed = ex.extended_matrix_block(z, t, n_max, m_max)
        oracle = ex.extended_exact(z, t, dim)
    rows = 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TABLE_COLUMNS)
        for n in range(n_max + 1):
            for m in range(m_max + 1):
                c, o = closed[n, m], oracle[n, m]
                w.writerow([n, m, *(repr(float(v)) for v in (c.real, c.imag, o.real, o.imag, abs(c - o)))])
                rows += 1
    return rows


def emit_probe_series(sigma: float, t_list: Iterable[float], path) -> int:
    """Write the Gaussian trace probe for each ``t`` as CSV.

    Values of ``t`` where the trace diverges produce a row of ``nan`` and a
    :class:`UserWarning`. Returns the number of data rows.
    """
    rows = 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(PROBE_COLUMNS)
        for t in t_list:
            try:
                probe, target = ps.trace_limit_probe(sigma, t)
            except DivergentSeriesError:
                warnings.warn(f"probe undefined at t = {t}; row left as nan", UserWarning, stacklevel=2)
                w.writerow([repr(float(t)), "nan", "nan", "nan"])
            else:
                w.writerow([repr(float(v)) for v in (t, probe.real, probe.imag, abs(probe - target))])
            rows += 1
    return rows


__all__ = [
    "CheckResult",
    "SCHEMA_VERSION",
    "SUITES",
    "SuiteConfig",
    "UsageError",
    "VerificationReport",
    "check_names",
    "emit_matrix_table",
    "emit_probe_series",
    "run_suites",
    "sample_points",
]
