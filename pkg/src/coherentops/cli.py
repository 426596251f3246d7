"""``coherentops`` command line: ``verify``, ``table`` and ``probe``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage or configuration errors.
"""
from __future__ import annotations

import argparse
import sys
import warnings

from .harness import SUITES, SuiteConfig, UsageError, emit_matrix_table, emit_probe_series, run_suites


def _complex(text: str) -> complex:
    try:
        re_, im_ = (float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}") from None
    return complex(re_, im_)


def _float_list(text: str) -> list[float]:
    if not text.strip():
        return []
    try:
        return [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _tol(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    try:
        if not sep:
            raise ValueError
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coherentops", description="Verify coherent-operator identities on a truncated Fock space.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification suites and write a JSON report")
    v.add_argument("--suite", action="append", dest="suites", metavar="NAME",
                   help=f"suite to run (repeatable); one of {', '.join(SUITES)}")
    v.add_argument("--dim", type=int, default=128)
    v.add_argument("--band", type=int, default=32)
    v.add_argument("--tol", action="append", type=_tol, default=[], metavar="NAME=V",
                   help="override the tolerance of one check")
    v.add_argument("--seed", type=int, default=SuiteConfig.seed)
    v.add_argument("--samples", type=int, default=SuiteConfig.samples)
    v.add_argument("--report", metavar="PATH", help="write the JSON report here (default: stdout)")
    v.add_argument("--timings", action="store_true", help="record wall times (reports stop being byte-stable)")

    t = sub.add_parser("table", help="closed-form vs brute-force matrix elements as CSV")
    t.add_argument("--kind", choices=("coherent", "extended"), required=True)
    t.add_argument("--nmax", type=int, required=True)
    t.add_argument("--mmax", type=int, required=True)
    t.add_argument("--z", type=_complex, required=True, metavar="RE,IM")
    t.add_argument("--t", type=float, default=None)
    t.add_argument("--out", required=True, metavar="PATH")

    p = sub.add_parser("probe", help="Gaussian pairing of the regularised trace as CSV")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--t", type=_float_list, required=True, metavar="T1,T2,...")
    p.add_argument("--out", required=True, metavar="PATH")
    return parser


def _verify(args) -> int:
    cfg = SuiteConfig(
        dim=args.dim,
        band=args.band,
        tol_overrides=dict(args.tol),
        samples=args.samples,
        seed=args.seed,
        suites=tuple(args.suites) if args.suites else SUITES,
    )
    report = run_suites(cfg, timings=args.timings)
    text = report.dumps()
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for c in report.checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name} residual={c.residual:.3e} tol={c.tol:.1e}", file=sys.stderr)
    return report.exit_code


def _table(args) -> int:
    if args.kind == "extended" and args.t is None:
        raise UsageError("--t is required for --kind extended")
    rows = emit_matrix_table(args.kind, args.nmax, args.mmax, args.z, args.t, args.out)
    print(f"wrote {rows} rows to {args.out}", file=sys.stderr)
    return 0


def _probe(args) -> int:
    if not args.sigma > 0:
        raise UsageError(f"--sigma must be positive, got {args.sigma}")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rows = emit_probe_series(args.sigma, args.t, args.out)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    print(f"wrote {rows} rows to {args.out}", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"verify": _verify, "table": _table, "probe": _probe}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"coherentops: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"coherentops: I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
