"""Command-line interface.

Exit codes: 0 certified or success, 1 structural failure, 2 input error, 3 capability
limit.
"""

import argparse
import dataclasses
import json
import logging
import pathlib
import sys
from collections.abc import Sequence
from typing import Any, Optional

from . import (
    __version__,
    codec,
    exactnum,
    leinartas,
    oracle,
    parser,
    pipeline,
    polyexp,
    precursive,
    semilin,
    skewgeom,
)
from .errors import BezivinError, InputError, ParseError
from .settings import Limits

logger = logging.getLogger(__name__)


def _read_text(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        try:
            return pathlib.Path(arg[1:]).read_text()
        except OSError as error:
            raise InputError(f"cannot read {arg[1:]}: {error.strerror or error}.") from error
    return arg


def _read_json(arg: str) -> Any:
    try:
        return json.loads(_read_text(arg))
    except json.JSONDecodeError as error:
        raise InputError(f"malformed JSON in {arg}: {error.msg}.") from error


def _expression(arg: str) -> parser.RationalExpr:
    return parser.from_str(_read_text(arg))


def _emit(args: argparse.Namespace, data: Any, text: str) -> None:
    print(codec.dumps(data) if args.json else text)


def _series_text(series: oracle.TruncatedSeries) -> str:
    if series.dim > 2:
        return "\n".join(
            f"{list(n)}  {exactnum.format_rational(c)}" for n, c in series.items()
        )
    if series.dim == 1:
        return "\n".join(
            f"{n[0]:>4}  {exactnum.format_rational(series.coefficient(n))}"
            for n in series.points()
        )
    cells = {n: exactnum.format_rational(series.coefficient(n)) for n in series.points()}
    width = max(len(c) for c in cells.values()) + 1
    rows = []
    for i in range(max(n[0] for n in cells) + 1):
        rows.append(
            "".join(cells[i, j].rjust(width) if (i, j) in cells else "" for j in range(
                max(n[1] for n in cells) + 1
            ))
        )
    return "\n".join(rows)


def _required(value: Optional[str], flag: str, command: str) -> str:
    if value is None:
        raise InputError(f"{command} needs {flag}.")
    return value


def _group(args: argparse.Namespace) -> exactnum.GroupSpec:
    if not args.group:
        raise InputError("this command needs --group, e.g. --group=-1,2,3.")
    return exactnum.GroupSpec.parse(args.group)


def _cmd_expand(args: argparse.Namespace, limits: Limits) -> int:
    expr = _expression(args.expr)
    series = oracle.expand_rational(expr.terms, args.bound, dim=expr.dim)
    _emit(args, codec.series_to_json(series), _series_text(series))
    return 0


def _decompose(expr: parser.RationalExpr, limits: Limits) -> list[leinartas.DecompTerm]:
    terms = []
    for term in expr.terms:
        split, notes = leinartas.gcd_normalize_rational(term)
        for note in notes:
            logger.warning("%s", note)
        terms.extend(leinartas.leinartas_decompose(split, limits=limits))
    return terms


def _cmd_decompose(args: argparse.Namespace, limits: Limits) -> int:
    terms = _decompose(_expression(args.expr), limits)
    text = "\n".join(parser.format_expr(t) for t in terms) or "0"
    _emit(args, [codec.term_to_json(t) for t in terms], text)
    return 0


def _partition(expr: parser.RationalExpr, limits: Limits) -> polyexp.PiecewisePolyExp:
    pieces = (polyexp.term_to_pieces(t) for t in _decompose(expr, limits))
    return polyexp.to_partition(polyexp.merge_all(pieces, expr.dim), limits=limits)


def _piecewise_text(p: polyexp.PiecewisePolyExp) -> str:
    lines = [f"semantics: {p.semantics}"]
    for piece in p.pieces:
        formula = " + ".join(
            f"({t.poly!r}) * {[exactnum.format_rational(b) for b in t.beta]}^m"
            for t in piece.formula.terms
        )
        lines.append(f"{piece.set}:  {formula}")
    if p.note:
        lines.append(f"note: {p.note}")
    return "\n".join(lines)


def _cmd_coeff_form(args: argparse.Namespace, limits: Limits) -> int:
    p = _partition(_expression(args.expr), limits)
    _emit(args, codec.piecewise_to_json(p), _piecewise_text(p))
    return 0


def _cmd_certify(args: argparse.Namespace, limits: Limits) -> int:
    report = pipeline.analyze(_expression(args.expr), _group(args), r=args.r, limits=limits)
    data = codec.report_to_json(report)
    verdict = report.verdict
    text = verdict.kind if verdict.l_max is None or verdict.kind == polyexp.POLYA else (
        f"{verdict.kind}({verdict.l_max})"
    )
    if verdict.witness_piece is not None:
        text += f"\nwitness piece: {verdict.witness_piece.set}"
    for note in report.notes:
        text += f"\nnote: {note}"
    _emit(args, data, text)
    return report.exit_code


def _cmd_hadamard(args: argparse.Namespace, limits: Limits) -> int:
    first = _expression(args.expr)
    series = oracle.expand_rational(first.terms, args.bound, dim=first.dim)
    if args.operation == "product":
        if args.other is None:
            raise InputError("hadamard product needs a second expression.")
        second = _expression(args.other)
        other = oracle.expand_rational(second.terms, args.bound, dim=second.dim)
        result = oracle.hadamard_product(series, other)
        _emit(args, codec.series_to_json(result), _series_text(result))
        return 0
    if args.closed_form:
        skew = skewgeom.torsion_normalize(
            skewgeom.from_pieces(_partition(first, limits)), limits=limits
        )
        inverse = skewgeom.subinverse_unambiguous(skew, limits=limits)
        text = parser.format_expr(
            parser.RationalExpr(first.dim, tuple(skewgeom.to_rational(inverse)))
        )
        _emit(args, codec.skewsum_to_json(inverse), text)
        return 0
    result = oracle.hadamard_subinverse(series)
    _emit(args, codec.series_to_json(result), _series_text(result))
    return 0


def _single_skewgeom(expr: parser.RationalExpr) -> skewgeom.SkewGeometric:
    if len(expr.terms) != 1 or len(expr.terms[0].numerator) != 1:
        raise InputError("expected a single fraction with a monomial numerator.")
    term = expr.terms[0]
    if any(b.mult != 1 for b in term.blocks):
        raise InputError("skew-geometric series have simple denominator factors.")
    ((u0, c0),) = term.numerator.items()
    factors = tuple(skewgeom.Factor(b.c, b.e) for b in term.blocks)
    return skewgeom.SkewGeometric(c0, u0, factors)


def _cmd_restrict(args: argparse.Namespace, limits: Limits) -> int:
    f = _single_skewgeom(_expression(args.expr))
    result = skewgeom.restrict_to(f, semilin.SimpleLinearSet.parse(args.set))
    _emit(args, codec.skewgeom_to_json(result), parser.format_expr(result.to_rational()))
    return 0


def _cmd_sets(args: argparse.Namespace, limits: Limits) -> int:
    sets = [semilin.SimpleLinearSet.parse(s) for s in args.sets]
    if args.operation == "member":
        point = exactnum.parse_vector(_required(args.point, "--point", "sets member"))
        coords = semilin.member_coords(point, sets[0])
        _emit(args, None if coords is None else list(coords), str(coords))
        return 0
    if args.operation == "intersect":
        if len(sets) != 2:
            raise InputError("intersect needs exactly two sets.")
        result = semilin.intersect_simple(*sets, limits=limits)
        text = "\n".join(str(c) for c in result.components) or "empty"
        _emit(args, codec.semilinear_to_json(result), text)
        return 0
    r, witness = semilin.max_overlap(sets, limits=limits)
    _emit(args, {"r": r, "witness": list(witness)}, f"r={r} witness={list(witness)}")
    return 0


def _cmd_prec(args: argparse.Namespace, limits: Limits) -> int:
    system = codec.system_from_json(_read_json(args.system))
    if args.operation == "eval":
        point = exactnum.parse_vector(_required(args.point, "--point", "prec eval"))
        value = precursive.evaluate(system, point, axis=args.axis - 1)
        _emit(args, exactnum.format_rational(value), exactnum.format_rational(value))
        return 0
    expr = _expression(_required(args.expr, "--expr", f"prec {args.operation}"))
    series = oracle.expand_rational(expr.terms, args.bound, dim=expr.dim)
    if args.operation == "check":
        violation = precursive.check_solution(system, series, args.bound)
        if violation is None:
            _emit(args, None, "ok")
            return 0
        data = {
            "coordinate": violation.coordinate,
            "n": list(violation.n),
            "residual": exactnum.format_rational(violation.residual),
        }
        _emit(args, data, f"violated: recursion {violation.coordinate} at {list(violation.n)}")
        return 1
    strips = exactnum.parse_vector(_required(args.strips, "--strips", "prec vanish"))
    verdict = precursive.vanishing_propagate(
        system, series, args.c, strips, bound=args.bound, limits=limits
    )
    data = {
        "confirmed": verdict.confirmed,
        "region": list(verdict.region),
        "witness": None if verdict.witness is None else list(verdict.witness),
    }
    text = f"vanishes on the orthant {list(verdict.region)}" if verdict.confirmed else (
        f"hypothesis fails at {list(verdict.witness)}"
    )
    _emit(args, data, text)
    return 0 if verdict.confirmed else 1


def _cmd_oracle_compare(args: argparse.Namespace, limits: Limits) -> int:
    first, second = _expression(args.expr), _expression(args.other)
    mismatch = oracle.compare(
        oracle.expand_rational(first.terms, args.bound, dim=first.dim),
        oracle.expand_rational(second.terms, args.bound, dim=second.dim),
    )
    if mismatch is None:
        _emit(args, None, "equal")
        return 0
    data = {
        "n": list(mismatch.n),
        "left": exactnum.format_rational(mismatch.left),
        "right": exactnum.format_rational(mismatch.right),
    }
    _emit(args, data, f"first mismatch at {list(mismatch.n)}: {data['left']} vs {data['right']}")
    return 1


def _cmd_scan(args: argparse.Namespace, limits: Limits) -> int:
    expr = _expression(args.expr)
    zeros = oracle.zero_scan(oracle.expand_rational(expr.terms, args.bound, dim=expr.dim))
    _emit(args, [list(n) for n in zeros], "\n".join(str(list(n)) for n in zeros))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bezivin",
        description="exact analysis of rational series with unit-product denominators",
    )
    ap.add_argument("--version", action="version", version=f"bezivin {__version__}")
    ap.add_argument("--bound", type=int, default=None, help="total-degree bound (default 12)")
    ap.add_argument("--group", help="group generators, e.g. -1,2,3")
    ap.add_argument("--json", action="store_true", help="print JSON")
    ap.add_argument(
        "--exact-verify",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="re-check exact identities after each construction",
    )
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    expr_help = "expression, @file or - for stdin"
    for name, func in (
        ("expand", _cmd_expand),
        ("decompose", _cmd_decompose),
        ("coeff-form", _cmd_coeff_form),
        ("scan", _cmd_scan),
    ):
        p = sub.add_parser(name)
        p.add_argument("expr", help=expr_help)
        p.set_defaults(func=func)

    p = sub.add_parser("certify")
    p.add_argument("expr", help=expr_help)
    p.add_argument("--r", type=int, default=None, help="claimed bound on the summands")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("hadamard")
    p.add_argument("operation", choices=("product", "subinverse"))
    p.add_argument("expr", help=expr_help)
    p.add_argument("other", nargs="?", help="second expression for product")
    p.add_argument("--closed-form", action="store_true")
    p.set_defaults(func=_cmd_hadamard)

    p = sub.add_parser("restrict")
    p.add_argument("expr", help=expr_help)
    p.add_argument("set", help='simple linear set "offset ; period ; ..."')
    p.set_defaults(func=_cmd_restrict)

    p = sub.add_parser("sets")
    p.add_argument("operation", choices=("member", "intersect", "overlap"))
    p.add_argument("sets", nargs="+", help='simple linear sets "offset ; period ; ..."')
    p.add_argument("--point", help="point for member")
    p.set_defaults(func=_cmd_sets)

    p = sub.add_parser("prec")
    p.add_argument("operation", choices=("eval", "check", "vanish"))
    p.add_argument("system", help="system JSON, @file or - for stdin")
    p.add_argument("--point")
    p.add_argument("--axis", type=int, default=1)
    p.add_argument("--expr", help="candidate series for check and vanish")
    p.add_argument("--c", type=int, default=0)
    p.add_argument("--strips")
    p.set_defaults(func=_cmd_prec)

    p = sub.add_parser("oracle-compare")
    p.add_argument("expr", help=expr_help)
    p.add_argument("other", help=expr_help)
    p.set_defaults(func=_cmd_oracle_compare)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    limits = dataclasses.replace(Limits.from_env(), exact_verify=args.exact_verify)
    if args.bound is None:
        args.bound = limits.bound
    limits = dataclasses.replace(limits, bound=args.bound)
    try:
        return args.func(args, limits)
    except ParseError as error:
        print(error.render(), file=sys.stderr)
        return error.exit_code
    except BezivinError as error:
        print(f"error: {error}", file=sys.stderr)
        return error.exit_code


if __name__ == "__main__":
    sys.exit(main())
