"""Command line interface.

Exit codes: 0 success, 2 enclosure violation, 3 input error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .core import NormKind
from .errors import (
    CapExceeded,
    ConvergenceFailure,
    EnclosureViolation,
    ParseError,
    PolyboundError,
    PolynomialError,
    SingularCoefficient,
)
from .harness import (
    FORMATS,
    Family,
    InstanceSpec,
    describe_instance,
    generate_instance,
    render,
    run_campaign,
    run_experiment,
)
from .pep import solve_spectrum

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_INPUT = 3
EXIT_NUMERICAL = 4

_NORMS = {"1": NormKind.ONE, "2": NormKind.TWO, "inf": NormKind.INFINITY}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which is reserved for violations here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _float_list(text):
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    return values


def _add_instance_args(p, with_input=True):
    if with_input:
        p.add_argument("--input", metavar="FILE", help="instance JSON file (overrides --family)")
    p.add_argument("--family", choices=[Family.SCALED_RANDOM.value, Family.SYMMETRIC_RANDOM.value],
                   default=Family.SCALED_RANDOM.value)
    p.add_argument("--n", type=int, default=5, help="matrix size")
    p.add_argument("--m", type=int, default=9, help="degree")
    p.add_argument("--scale-base", type=float, default=10.0)
    p.add_argument("--scale-offset", type=int, default=-3)
    p.add_argument("--distribution", choices=["normal", "uniform"], default="normal")


def _add_bound_args(p):
    p.add_argument("--norm", choices=sorted(_NORMS), default="2")
    p.add_argument("--holder-p", type=_float_list, default=[2.0], metavar="P[,P...]",
                   help="Hoelder exponents (> 1), comma separated")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polybound", description="Eigenvalue modulus bounds for matrix polynomials.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bounds", help="all bounds for one instance, checked against its spectrum")
    _add_instance_args(p)
    p.add_argument("--seed", type=int, default=0)
    _add_bound_args(p)
    p.add_argument("--format", choices=FORMATS, default="table")
    p.add_argument("--timings", action="store_true", help="print phase wall times to stderr")

    p = sub.add_parser("spectrum", help="ground-truth eigenvalues only")
    _add_instance_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=FORMATS, default="table")

    p = sub.add_parser("campaign", help="many seeded instances, aggregated")
    _add_instance_args(p, with_input=False)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed0", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    _add_bound_args(p)
    p.add_argument("--format", choices=FORMATS, default="table")

    p = sub.add_parser("verify", help="enclosure check only; result in the exit code")
    _add_instance_args(p)
    p.add_argument("--seed", type=int, default=None, help="single instance seed")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed0", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    _add_bound_args(p)
    return parser


def _spec(args, seed) -> InstanceSpec:
    if getattr(args, "input", None):
        return InstanceSpec(family=Family.FILE, path=args.input, seed=0)
    return InstanceSpec(n=args.n, m=args.m, family=Family(args.family), seed=seed,
                        scale_base=args.scale_base, scale_offset=args.scale_offset,
                        distribution=args.distribution)


def _render_spectrum(instance: dict, spectrum, fmt: str) -> str:
    eigs = spectrum.eigenvalues
    if fmt == "json":
        doc = {
            "instance": instance,
            "eigenvalues": [[float(z.real), float(z.imag)] for z in eigs],
            "min_modulus": spectrum.min_modulus,
            "max_modulus": spectrum.max_modulus,
            "residual_flags": spectrum.flagged,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        lines = ["re,im,modulus,residual"]
        lines += [f"{z.real!r},{z.imag!r},{abs(z)!r},{float(r)!r}" for z, r in zip(eigs, spectrum.residuals)]
        return "\r\n".join(lines) + "\r\n"
    lines = [f"{len(eigs)} eigenvalues, |lambda| in [{spectrum.min_modulus:.6g}, {spectrum.max_modulus:.6g}],"
             f" residual flags: {spectrum.flagged}"]
    lines += [f"{z.real:>14.6g} {z.imag:+14.6g}i   |{abs(z):.6g}|" for z in eigs]
    return "\n".join(lines) + "\n"


def _run(args) -> int:
    kind = _NORMS[args.norm] if hasattr(args, "norm") else NormKind.TWO
    if args.command == "bounds":
        spec = _spec(args, args.seed)
        report = run_experiment(generate_instance(spec), kind, args.holder_p, spec=spec)
        sys.stdout.write(render(report, args.format))
        if args.timings:
            for phase, seconds in report.timings.items():
                print(f"{phase}: {seconds:.4f}s", file=sys.stderr)
        return EXIT_OK if report.report.all_enclosed else EXIT_VIOLATION
    if args.command == "spectrum":
        spec = _spec(args, args.seed)
        P = generate_instance(spec)
        sys.stdout.write(_render_spectrum(describe_instance(P, spec), solve_spectrum(P), args.format))
        return EXIT_OK
    if args.command == "campaign":
        summary = run_campaign(_spec(args, args.seed0), args.count, args.seed0, kind=kind,
                               holder_ps=args.holder_p, jobs=args.jobs)
        sys.stdout.write(render(summary, args.format))
        return EXIT_OK
    if args.command == "verify":
        if args.input or args.seed is not None:
            spec = _spec(args, args.seed or 0)
            report = run_experiment(generate_instance(spec), kind, args.holder_p, spec=spec)
            if not report.report.all_enclosed:
                raise EnclosureViolation(", ".join(report.report.violations()), seed=spec.seed)
        else:
            run_campaign(_spec(args, args.seed0), args.count, args.seed0, kind=kind,
                         holder_ps=args.holder_p, jobs=args.jobs)
        return EXIT_OK
    raise AssertionError(args.command)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except EnclosureViolation as exc:
        print(f"enclosure violation (seed {exc.seed}): {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (ParseError, PolynomialError, CapExceeded, SingularCoefficient, OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConvergenceFailure, PolyboundError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
