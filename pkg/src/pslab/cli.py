"""Command-line front end: ``pslab <subcommand> ...``.

Series travel between subcommands as fixture files (``pslab-series 1``);
``-`` means stdin/stdout.  Exit codes: 0 ok, 1 usage, 2 I/O or parse error,
3 precondition violation, 4 campaign failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import isingverify
from .automaton import AutomatonError, export_dot, p_kernel_closure
from .congruence import RelationError, find_algebraic, solve_frobenius
from .diagonal import DiagonalError, MultivariateRational, diagonal, parse_polynomial
from .genlib import GENERATORS, FixtureFormatError, SeriesFixture, dumps_fixture, gen_named, loads_fixture
from .series import Modulus, SeriesError, TruncatedSeries, is_prime, reduce_mod

EXIT_USAGE, EXIT_IO, EXIT_PRECONDITION, EXIT_FAIL = 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, msg: str, code: int):
        super().__init__(msg)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- I/O ----------------------------------------------------------------------

def _read_text(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from None


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}", EXIT_IO) from None


def _read_series(path: str) -> SeriesFixture:
    try:
        return loads_fixture(_read_text(path), path)
    except FixtureFormatError as exc:
        raise CliError(str(exc), EXIT_IO) from None


def _write_series(path, name: str, series: TruncatedSeries, provenance: str) -> None:
    _write_text(path, dumps_fixture(SeriesFixture(name, series, provenance)))


# -- subcommands --------------------------------------------------------------

def cmd_gen(args) -> int:
    series = gen_named(args.name, args.order)
    _write_series(args.out, args.name, series, f"generator {args.name} order {args.order}")
    return 0


def cmd_reduce(args) -> int:
    fx = _read_series(args.input)
    mod = Modulus(args.prime, args.power)
    series = reduce_mod(fx.series, mod)
    _write_series(args.out, f"{fx.name}_mod{mod.m}", series, f"{fx.provenance}; reduced mod {mod}")
    return 0


def cmd_solve(args) -> int:
    fx = _read_series(args.input)
    found = solve_frobenius(fx.series, args.iterates, args.poly_degree, args.inhom_degree)
    if not found.relations:
        raise CliError("no relation within the given degree bounds", EXIT_PRECONDITION)
    rels = found.relations if args.all else found.relations[:1]
    _write_text(args.out, "\n".join(r.dumps() for r in rels))
    print(f"{len(found.relations)} relation(s), {len(found.torsion)} torsion; "
          f"{found.rows} equations for {found.unknowns} unknowns", file=sys.stderr)
    return 0


def cmd_algebraic(args) -> int:
    fx = _read_series(args.input)
    found = find_algebraic(fx.series, args.dx, args.dy)
    if not found:
        raise CliError("no algebraic relation within the given degree bounds", EXIT_PRECONDITION)
    rels = found if args.all else found[:1]
    _write_text(args.out, "\n".join(r.dumps() for r in rels))
    print(f"best: {found[0]} = 0 ({found[0].status})", file=sys.stderr)
    return 0


def cmd_automaton(args) -> int:
    fx = _read_series(args.input)
    a = p_kernel_closure(fx.series, args.max_states, args.window)
    _write_text(args.out, a.dumps())
    if args.dot:
        _write_text(args.dot, export_dot(a))
    return 0


def cmd_diagonal(args) -> int:
    try:
        for text in (args.numerator, args.denominator):
            parse_polynomial(text)
    except DiagonalError as exc:
        raise CliError(str(exc), EXIT_IO) from None
    fr = MultivariateRational.parse(args.numerator, args.denominator)
    series = diagonal(fr, args.order)
    _write_series(args.out, "diagonal", series,
                  f"diagonal of ({args.numerator})/({args.denominator}) in {','.join(fr.variables)}")
    return 0


def cmd_verify(args) -> int:
    specs = isingverify.select(args.filter)
    if not specs:
        raise CliError(f"no check matches {args.filter!r}", EXIT_USAGE)
    reports = []
    for spec in specs:
        rep = isingverify.run_check(spec, args.order)
        reports.append(rep)
        if not args.quiet:
            print(rep.line(), flush=True)
    text = isingverify.format_report(reports)
    if args.quiet:
        sys.stdout.write(text.splitlines()[-1] + "\n")
    elif args.report is None:
        print(text.splitlines()[-1])
    if args.report:
        _write_text(args.report, text)
    return EXIT_FAIL if any(r.status == isingverify.FAIL for r in reports) else 0


# -- parser -------------------------------------------------------------------

def _nonneg(text: str) -> int:
    try:
        v = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a decimal integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive(text: str) -> int:
    v = _nonneg(text)
    if v == 0:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _prime(text: str) -> int:
    v = _positive(text)
    if not is_prime(v):
        raise argparse.ArgumentTypeError(f"{v} is not prime")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pslab", description="Truncated power series modulo prime powers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_, description=help_)
        p.set_defaults(func=fn)
        return p

    def io(p, out=True):
        p.add_argument("input", help="series file ('-' for stdin)")
        if out:
            p.add_argument("-o", "--out", help="output file (default stdout)")

    p = add("gen", cmd_gen, "Write a registered generator's series to a file.")
    p.add_argument("name", choices=sorted(GENERATORS), metavar="NAME")
    p.add_argument("--order", type=_nonneg, required=True)
    p.add_argument("-o", "--out")

    p = add("reduce", cmd_reduce, "Reduce a series modulo p^r.")
    io(p)
    p.add_argument("--prime", type=_prime, required=True)
    p.add_argument("--power", type=_positive, default=1)

    p = add("solve", cmd_solve, "Search for sum_n p_n(x) f(x^(p^n)) = q(x).")
    io(p)
    p.add_argument("--iterates", type=_nonneg, required=True, help="h, the highest Frobenius iterate")
    p.add_argument("--poly-degree", type=_nonneg, required=True)
    p.add_argument("--inhom-degree", type=int, default=-1, help="-1 for a homogeneous relation")
    p.add_argument("--all", action="store_true", help="write every relation, best first")

    p = add("algebraic", cmd_algebraic, "Search for P(x, f(x)) = 0 mod p.")
    io(p)
    p.add_argument("--dx", type=_nonneg, required=True)
    p.add_argument("--dy", type=_positive, required=True)
    p.add_argument("--all", action="store_true")

    p = add("automaton", cmd_automaton, "Build a p-automaton from a series mod p.")
    io(p)
    p.add_argument("--max-states", type=_positive, default=256)
    p.add_argument("--window", type=_positive, default=32, help="minimum comparison window")
    p.add_argument("--dot", help="also write a Graphviz file")

    p = add("diagonal", cmd_diagonal, "Diagonal of a multivariate rational function.")
    p.add_argument("numerator")
    p.add_argument("denominator")
    p.add_argument("--order", type=_nonneg, required=True)
    p.add_argument("-o", "--out")

    p = add("verify", cmd_verify, "Run the verification campaign.")
    p.add_argument("filter", nargs="?", help="check ids or globs, comma separated (e.g. C05,C1*)")
    p.add_argument("--report", help="write the full report here")
    p.add_argument("--order", type=_positive, default=isingverify.DEFAULT_ORDER)
    p.add_argument("-q", "--quiet", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "inhom_degree", 0) < -1:
        parser.error("--inhom-degree must be >= -1")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"pslab: {exc}", file=sys.stderr)
        return exc.code
    except (SeriesError, RelationError, AutomatonError, DiagonalError) as exc:
        print(f"pslab: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
