"""Command-line driver: verification suites and data emitters.

Subcommands::

    qchihara verify identities [--n-max N] [--tol T] [--out F] [--format ...]
    qchihara verify hankel     [--n-max N] ...
    qchihara verify measures   [--tol T] ...
    qchihara verify discrete   [--m-max M] ...
    qchihara verify all
    qchihara emit density --kind {qhermite,mu,asc} --q Q [...] --out F.csv
    qchihara emit moments --n-max N --out F.csv
    qchihara emit measure --q Q --m M --y Y --out F.json

Exit status: 0 when every check passes, 1 on any failed check, 2 on
usage errors.  The environment variable QCHIHARA_TOL overrides the
default numeric tolerance where --tol is not given.  Emitters write a
matplotlib figure next to the data file unless --no-figure is passed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import discrete, genfun, hankel, identities, measures
from .reporting import Check, Report

_DENSITY_GRID_Q = (-0.4, 0.0, 0.3, 0.7)
_RHO_GRID = (0.2, 0.6)
_Y_GRID = (0.0, 0.8)
_ASC_PARAMS = (0.4, 0.49)


def _positive_float(text):
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _resolve_tol(explicit, default):
    """Explicit --tol wins; QCHIHARA_TOL overrides only the default."""
    if explicit is not None:
        return explicit
    raw = os.environ.get("QCHIHARA_TOL")
    if raw is None:
        return default
    value = float(raw)
    if value <= 0:
        raise SystemExit("QCHIHARA_TOL must be > 0")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qchihara",
        description="Verify q-Hermite / Al-Salam-Chihara polynomial identities "
        "and emit density and measure data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run a verification suite")
    vsub = verify.add_subparsers(dest="suite", required=True)

    def add_common(p):
        p.add_argument("--out", type=Path, help="write the report to this path")
        p.add_argument(
            "--format", choices=("json", "text"), default="text", dest="fmt"
        )

    p = vsub.add_parser("identities", help="connection/convolution/duality/orthogonality")
    p.add_argument("--n-max", type=_positive_int, default=8)
    p.add_argument("--tol", type=_positive_float, default=None, help="duality tolerance")
    add_common(p)

    p = vsub.add_parser("hankel", help="determinant ratio identities")
    p.add_argument("--n-max", type=_positive_int, default=None,
                   help="ratio range for both families (defaults: S 6, M 7)")
    add_common(p)

    p = vsub.add_parser("measures", help="densities, kernel, moments, convolution")
    p.add_argument("--tol", type=_positive_float, default=None)
    p.add_argument("--epsilon", type=_positive_float, default=None,
                   help="product truncation epsilon")
    p.add_argument("--max-factors", type=_positive_int, default=None)
    add_common(p)

    p = vsub.add_parser("discrete", help="q > 1 finite measures")
    p.add_argument("--m-max", type=_positive_int, default=5)
    p.add_argument("--tol", type=_positive_float, default=None)
    add_common(p)

    p = vsub.add_parser("all", help="every suite")
    p.add_argument("--tol", type=_positive_float, default=None)
    add_common(p)

    emit = sub.add_parser("emit", help="emit data files")
    esub = emit.add_subparsers(dest="what", required=True)

    p = esub.add_parser("density", help="CSV of (x, density) samples")
    p.add_argument("--kind", choices=("qhermite", "mu", "asc"), required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--y", type=float, default=None)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--points", type=_positive_int, default=200)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--no-figure", action="store_true")

    p = esub.add_parser("moments", help="CSV of conditional-measure moments")
    p.add_argument("--n-max", type=_positive_int, default=8)
    p.add_argument("--out", type=Path, required=True)

    p = esub.add_parser("measure", help="JSON of a q > 1 discrete measure")
    p.add_argument("--q", type=str, required=True,
                   help="rational q > 1, e.g. 2 or 3/2")
    p.add_argument("--m", type=int, required=True, help="rho^2 = q^(-m)")
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--rho-sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--no-figure", action="store_true")

    return parser


# -- verify suites -----------------------------------------------------------

def run_identities(n_max=8, tol=None):
    tol = _resolve_tol(tol, 1e-9)
    report = Report("identities")
    report.extend(identities.verify_connection(n_max))
    report.extend(genfun.verify_expansion(n_max))
    report.extend(genfun.verify_convolution_zero(n_max))
    report.extend(identities.verify_duality(min(n_max, 8), tol=tol))
    report.extend(identities.verify_orthogonality(min(n_max, 8), min(n_max, 6)))
    return report


def run_hankel(n_max=None):
    report = Report("hankel")
    report.extend(hankel.verify_moment_hankel(6 if n_max is None else n_max))
    report.extend(hankel.verify_hermite_hankel(7 if n_max is None else n_max))
    return report


def run_measures(tol=None, epsilon=None, max_factors=None):
    tol = _resolve_tol(tol, 1e-6)
    policy = None
    if epsilon is not None or max_factors is not None:
        policy = measures.TruncationPolicy(
            epsilon=epsilon if epsilon is not None else 1e-15,
            max_factors=max_factors if max_factors is not None else 500,
        )
    report = Report("measures")
    for q in _DENSITY_GRID_Q:
        report.checks.append(measures.normalization_check("qhermite", q, tol=1e-7))
        for rho in _RHO_GRID:
            for y in _Y_GRID:
                report.checks.append(
                    measures.normalization_check("mu", q, tol=1e-7, rho=rho, y=y)
                )
        report.checks.append(
            measures.normalization_check(
                "asc", q, tol=1e-7, a=_ASC_PARAMS[0], b=_ASC_PARAMS[1]
            )
        )
    report.extend(measures.conditional_moment_checks(0.5, 0.6, 0.3, n_max=8, tol=tol))
    report.extend(measures.kernel_agreement_checks(tol=1e-8, policy=policy))
    report.extend(measures.density_consistency_checks())
    report.checks.append(measures.verify_chapman(0.5, 0.6, 0.2, -0.4, 0.5, tol=tol))
    return report


def run_discrete(m_max=5, tol=None):
    tol = _resolve_tol(tol, 1e-7)
    report = Report("discrete")
    for q in (Fraction(3, 2), 2, 3):
        for m in range(m_max + 1):
            for y in (0.0, 0.5, -0.5):
                meas = discrete.discrete_measure(m, q, y)
                report.extend(
                    discrete.verify_discrete_solution(meas, 2 * m + 4, tol=tol)
                )
    report.extend(discrete.verify_divisibility(m_max=min(m_max, 4)))
    rejected = discrete.existence_check(Fraction(1, 3), 2)
    report.checks.append(
        Check(
            "discrete",
            "existence-reject[rho2=1/3,q=2]",
            "no probability solution when rho^2 is not in {q^-m}",
            rejected.kind == "no_solution" and rejected.first_negative == 3,
            residual=0.0,
            detail=f"verdict: {rejected}",
        )
    )
    return report


def run_all(tol=None):
    combined = Report("all")
    for report in (
        run_identities(tol=tol),
        run_hankel(),
        run_measures(tol=tol),
        run_discrete(tol=tol),
    ):
        combined.extend(report.checks)
    return combined


def _emit_report(report, args):
    if args.fmt == "json":
        payload = json.dumps(report.as_dict(), indent=2, sort_keys=True)
    else:
        payload = "\n".join(report.text_lines())
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(payload + "\n", encoding="utf-8")
        print(f"report written to {args.out}")
        for line in report.text_lines()[-1:]:
            print(line)
    else:
        print(payload)
    return 0 if report.passed else 1


# -- emitters ----------------------------------------------------------------

def emit_density(args):
    params = {}
    if args.kind == "mu":
        if args.rho is None or args.y is None:
            raise SystemExit("emit density --kind mu requires --rho and --y")
        params = {"rho": args.rho, "y": args.y}
    elif args.kind == "asc":
        if args.a is None or args.b is None:
            raise SystemExit("emit density --kind asc requires --a and --b")
        params = {"a": args.a, "b": args.b}
    xs, ys = measures.density_grid(args.kind, args.q, points=args.points, **params)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", encoding="utf-8") as handle:
        handle.write("x,density\n")
        for xv, yv in zip(xs, ys):
            handle.write(f"{xv:.17g},{yv:.17g}\n")
    print(f"wrote {len(xs)} samples to {args.out}")
    if not args.no_figure:
        from . import plots

        label = ", ".join(f"{k}={v}" for k, v in {"q": args.q, **params}.items())
        figure_path = args.out.with_suffix(".png")
        plots.density_figure(xs, ys, f"{args.kind} density ({label})", figure_path)
        print(f"wrote figure to {figure_path}")
    return 0


def emit_moments(args):
    values = hankel.moments_of_mu(args.n_max)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", encoding="utf-8") as handle:
        handle.write("n,moment\n")
        for n, moment in enumerate(values):
            handle.write(f'{n},"{moment}"\n')
    print(f"wrote moments m_0..m_{args.n_max} to {args.out}")
    return 0


def emit_measure(args):
    q = Fraction(args.q)
    meas = discrete.discrete_measure(args.m, q, args.y, rho_sign=args.rho_sign)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(
        json.dumps(meas.as_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"wrote discrete measure ({len(meas.support)} points) to {args.out}")
    if not args.no_figure:
        from . import plots

        figure_path = args.out.with_suffix(".png")
        plots.measure_figure(
            meas.support,
            meas.weights,
            f"discrete measure (q={args.q}, m={args.m}, y={args.y})",
            figure_path,
        )
        print(f"wrote figure to {figure_path}")
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        if args.suite == "identities":
            report = run_identities(n_max=args.n_max, tol=args.tol)
        elif args.suite == "hankel":
            report = run_hankel(n_max=args.n_max)
        elif args.suite == "measures":
            report = run_measures(
                tol=args.tol, epsilon=args.epsilon, max_factors=args.max_factors
            )
        elif args.suite == "discrete":
            report = run_discrete(m_max=args.m_max, tol=args.tol)
        else:
            report = run_all(tol=args.tol)
        return _emit_report(report, args)
    if args.what == "density":
        return emit_density(args)
    if args.what == "moments":
        return emit_moments(args)
    return emit_measure(args)


if __name__ == "__main__":
    sys.exit(main())
