"""Command line front end.

Exit codes: 0 success, 1 a check failed, 2 bad usage or input, 3 no solution
within the requested bounds.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog
from .catalog import NoCatalogEntry
from .expr import ParseError, parse_operator, print_operator
from .reduction import NoSolution, reduce_detailed
from .repspace import NotInvariant, NotTriangular, basis, spectrum
from .verify import SUITES, run_suite
from .weyl import DiffOp, op_commutator, op_compose

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NOSOLUTION = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read_operator(path: str) -> DiffOp:
    """diffop-v1 JSON, or operator text when the file is not JSON."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        try:
            return parse_operator(text)
        except ParseError as exc:
            raise UsageError(f"{path}: {exc}") from None
    try:
        return DiffOp.from_json(data)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: malformed operator: {exc}") from None


def _catalog_k(k: int) -> None:
    if k not in catalog.CATALOG_KS:
        raise UsageError(f"no catalog integral for k={k}")


# ---------------------------------------------------------------------------
# subcommands

def cmd_catalog(args) -> int:
    _catalog_k(args.k)
    builders = {
        "H": catalog.build_hamiltonian,
        "I1": catalog.build_I1,
        "I2": catalog.build_I2,
        "I12": catalog.build_I12,
    }
    op = builders[args.which](catalog.ModelParams(args.k))
    text = op.dumps() if args.format == "json" else print_operator(op) + "\n"
    _write(text, args.out)
    return EXIT_OK


def cmd_commute(args) -> int:
    a, b = _read_operator(args.a), _read_operator(args.b)
    result = op_commutator(a, b)
    text = result.dumps() if args.format == "json" else print_operator(result) + "\n"
    _write(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    _catalog_k(args.k)
    report = run_suite(args.k, args.suite, heavy=args.heavy)
    timing = not args.no_timing
    text = report.dumps(timing) if args.format == "json" else report.to_text(timing)
    _write(text, args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def _parse_caps(text: str | None):
    caps = [None, None, None, 1]
    if not text:
        return tuple(caps)
    names = ("H", "I1", "I2", "I12")
    for item in text.split(","):
        name, _, value = item.partition("=")
        name = name.strip()
        if name not in names or not value.strip():
            raise UsageError(f"bad cap {item!r}; use e.g. I12=1,H=4 or I12=none")
        v = value.strip().lower()
        caps[names.index(name)] = None if v == "none" else int(v)
    return tuple(caps)


def _reduce_target(args, gens) -> DiffOp:
    if args.target:
        return _read_operator(args.target)
    names = {"H": 0, "I1": 1, "I2": 2, "I12": 3}
    if args.commutator:
        x, y = args.commutator
        return op_commutator(gens[names[x]], gens[names[y]])
    x, y = args.product
    return op_compose(gens[names[x]], gens[names[y]])


def cmd_reduce(args) -> int:
    if args.gens:
        gens = [_read_operator(p) for p in args.gens]
    elif args.k is not None:
        _catalog_k(args.k)
        gens = list(catalog.generators(args.k))
    else:
        raise UsageError("give --gens H I1 I2 I12 or --k")
    if (args.commutator or args.product) and args.k is None and not args.gens:
        raise UsageError("--commutator and --product need generators")
    target = _reduce_target(args, gens)
    caps = _parse_caps(args.caps)
    try:
        red = reduce_detailed(
            target,
            gens,
            caps=caps,
            total_degree=args.degree,
            param_degree=args.param_degree,
            method=args.method,
            max_param_degree=args.max_param_degree,
        )
    except NoSolution as exc:
        sys.stderr.write(f"no solution: {exc}\n")
        return EXIT_NOSOLUTION
    text = red.result.dumps() if args.format == "json" else str(red.result) + "\n"
    _write(text, args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    if args.N < 0 or args.s < 1 or args.k < 1:
        raise UsageError("need k >= 1, N >= 0 and s >= 1")
    params = catalog.ModelParams(args.k, w=args.w)
    H = catalog.build_hamiltonian(params)
    try:
        values = spectrum(H, args.N, args.s)
    except (NotInvariant, NotTriangular) as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_FAIL
    lines = ["p\tq\teigenvalue"]
    for (p, q), e in zip(basis(args.N, args.s).elements, values):
        lines.append(f"{p}\t{q}\t{e}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ttw", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="print a catalog operator")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--which", choices=("H", "I1", "I2", "I12"), required=True)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("commute", help="commutator [A, B] of two operator files")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_commute)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--heavy", action="store_true", help="also run the slow k=4 reductions")
    p.add_argument("--no-timing", action="store_true", help="omit timings so output is byte-stable")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reduce", help="write an operator as a polynomial in H, I1, I2, I12")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--target", help="operator file (diffop-v1 JSON or operator text)")
    group.add_argument("--commutator", nargs=2, metavar=("X", "Y"), choices=("H", "I1", "I2", "I12"))
    group.add_argument("--product", nargs=2, metavar=("X", "Y"), choices=("H", "I1", "I2", "I12"))
    p.add_argument("--gens", nargs=4, metavar=("H", "I1", "I2", "I12"))
    p.add_argument("--k", type=int, help="use the catalog generators for this k")
    p.add_argument("--degree", type=int, default=2, help="total degree bound")
    p.add_argument("--param-degree", type=int, help="starting a,b,w degree bound")
    p.add_argument("--max-param-degree", type=int, default=16)
    p.add_argument("--caps", help="exponent caps, e.g. I12=1 (the default) or I12=none")
    p.add_argument("--method", choices=("pointwise", "monomial"), default="pointwise")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("spectrum", help="eigenvalues of h_k on P_N^(s)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--w", type=_fraction, help="bind w to a rational value")
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectrum)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, NoCatalogEntry) as exc:
        sys.stderr.write(f"ttw {args.command}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
