"""Conversions between domain objects and their JSON shapes.

Rationals are written as strings "a" or "a/b" so that no precision is ever lost.
"""

import json
from collections.abc import Sequence
from fractions import Fraction
from typing import Any

from .errors import InputError
from .exactnum import format_rational, to_fraction
from .leinartas import Block, DecompTerm, UnitProductRational
from .oracle import TruncatedSeries
from .pipeline import Report
from .polyexp import ExponentialPolynomial, ExpTerm, PiecewisePolyExp, PolyExpPiece
from .polys import Poly
from .precursive import PRecursiveSystem
from .semilin import SemilinearSet, SimpleLinearSet
from .skewgeom import Factor, SkewGeometric, SkewGeomSum

JSON = dict[str, Any]


def dumps(obj: Any) -> str:
    """Serializes with sorted keys so equal objects give equal bytes."""
    return json.dumps(obj, sort_keys=True, indent=2)


def rational(value: Fraction) -> str:
    return format_rational(value)


def _rational_in(value: Any) -> Fraction:
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise InputError(f"expected a rational string, got {value!r}.")
    return to_fraction(value)


def coefficients_to_json(poly: Poly, key: str = "n") -> list[JSON]:
    """Returns [{"n": [...], "c": "a/b"}, ...] in lexicographic exponent order."""
    return [{key: list(n), "c": rational(c)} for n, c in poly.items()]


def coefficients_from_json(items: Sequence[JSON], dim: int, key: str = "n") -> Poly:
    return Poly(dim, {tuple(item[key]): _rational_in(item["c"]) for item in items})


def series_to_json(series: TruncatedSeries) -> list[JSON]:
    return coefficients_to_json(series.poly)


def rational_to_json(r: UnitProductRational) -> JSON:
    return {
        "numerator": coefficients_to_json(r.numerator),
        "blocks": [{"c": rational(b.c), "e": list(b.e), "mult": b.mult} for b in r.blocks],
    }


def rational_from_json(data: JSON) -> UnitProductRational:
    blocks = tuple(Block(tuple(b["e"]), _rational_in(b["c"]), int(b.get("mult", 1))) for b in data["blocks"])
    if blocks:
        dim = len(blocks[0].e)
    elif data["numerator"]:
        dim = len(data["numerator"][0]["n"])
    else:
        raise InputError("cannot infer the dimension of an empty fraction.")
    return UnitProductRational(dim, coefficients_from_json(data["numerator"], dim), blocks)


def term_to_json(term: DecompTerm) -> JSON:
    data = rational_to_json(term)
    data["independent_verified"] = term.independent_verified
    return data


def set_to_json(s: SimpleLinearSet) -> JSON:
    return {"offset": list(s.offset), "periods": [list(p) for p in s.periods]}


def set_from_json(data: JSON) -> SimpleLinearSet:
    return SimpleLinearSet(tuple(data["offset"]), tuple(tuple(p) for p in data["periods"]))


def semilinear_to_json(s: SemilinearSet) -> JSON:
    return {"disjoint": s.disjoint, "components": [set_to_json(c) for c in s.components]}


def formula_to_json(formula: ExponentialPolynomial) -> list[JSON]:
    return [
        {"B": coefficients_to_json(t.poly, "mono"), "beta": [rational(b) for b in t.beta]}
        for t in formula.terms
    ]


def piecewise_to_json(p: PiecewisePolyExp) -> JSON:
    data = {
        "semantics": p.semantics,
        "pieces": [
            {"set": set_to_json(piece.set), "terms": formula_to_json(piece.formula)}
            for piece in p.pieces
        ],
    }
    if p.note:
        data["note"] = p.note
    return data


def piecewise_from_json(data: JSON, dim: int) -> PiecewisePolyExp:
    pieces = []
    for item in data["pieces"]:
        s = set_from_json(item["set"])
        terms = tuple(
            ExpTerm(
                coefficients_from_json(t["B"], s.rank, "mono"),
                tuple(_rational_in(b) for b in t["beta"]),
            )
            for t in item["terms"]
        )
        pieces.append(PolyExpPiece(s, ExponentialPolynomial(s.rank, terms)))
    return PiecewisePolyExp(dim, tuple(pieces), data["semantics"], data.get("note"))


def skewgeom_to_json(f: SkewGeometric) -> JSON:
    return {
        "c0": rational(f.c0),
        "u0": list(f.u0),
        "factors": [{"c": rational(x.c), "e": list(x.e)} for x in f.factors],
    }


def skewgeom_from_json(data: JSON) -> SkewGeometric:
    factors = tuple(Factor(_rational_in(x["c"]), tuple(x["e"])) for x in data["factors"])
    return SkewGeometric(_rational_in(data["c0"]), tuple(data["u0"]), factors)


def skewsum_to_json(f: SkewGeomSum) -> JSON:
    return {"status": f.status, "summands": [skewgeom_to_json(s) for s in f.summands]}


def skewsum_from_json(data: JSON, dim: int) -> SkewGeomSum:
    summands = tuple(skewgeom_from_json(s) for s in data["summands"])
    return SkewGeomSum(dim, summands, data.get("status", "unknown"))


def _univariate_to_json(q: Poly) -> list[str]:
    return [rational(q.coefficient((i,))) for i in range(q.degree(0) + 1)]


def _univariate_from_json(coeffs: Sequence[Any]) -> Poly:
    return Poly(1, {(i,): _rational_in(c) for i, c in enumerate(coeffs)})


def system_to_json(system: PRecursiveSystem) -> JSON:
    return {
        "d": system.dim,
        "k": system.size,
        "recursions": {
            str(j + 1): [{"a": list(a), "q": _univariate_to_json(q)} for a, q in recursion]
            for j, recursion in enumerate(system.recursions)
        },
        "sections": [
            {"axis": axis + 1, "value": value, "system": system_to_json(section)}
            for (axis, value), section in sorted(system.sections.items())
        ],
        "initial": [
            {"n": list(n), "c": rational(c)} for n, c in sorted(system.initial.items())
        ],
    }


def system_from_json(data: JSON) -> PRecursiveSystem:
    """Reads the system file format; recursion keys and section axes are 1-based."""
    dim = int(data["d"])
    try:
        recursions = tuple(
            tuple(
                (tuple(item["a"]), _univariate_from_json(item["q"]))
                for item in data["recursions"][str(j + 1)]
            )
            for j in range(dim)
        )
    except KeyError as e:
        raise InputError(f"system file lacks recursion {e}.") from e
    sections = {
        (int(s["axis"]) - 1, int(s["value"])): system_from_json(s["system"])
        for s in data.get("sections", [])
    }
    initial = {tuple(i["n"]): _rational_in(i["c"]) for i in data.get("initial", [])}
    return PRecursiveSystem(dim, int(data["k"]), recursions, sections, initial)


def report_to_json(report: Report) -> JSON:
    verdict = report.verdict
    data: JSON = {
        "verdict": verdict.kind,
        "l_max": verdict.l_max,
        "terms": [term_to_json(t) for t in report.terms],
        "attestations": report.attestations,
        "notes": report.notes,
    }
    if report.partition is not None:
        data["partition"] = piecewise_to_json(report.partition)
    if verdict.witness_piece is not None:
        data["witness"] = {
            "set": set_to_json(verdict.witness_piece.set),
            "beta": [rational(b) for b in verdict.witness_term.beta],
        }
        if verdict.witness_value is not None:
            data["witness"]["value"] = rational(verdict.witness_value)
    if report.skew is not None:
        data["skew"] = skewsum_to_json(report.skew)
    if report.group_verdict is not None:
        data["group"] = {
            "kind": report.group_verdict.kind,
            "r": report.group_verdict.r_eff,
            "within_r": report.group_verdict.within_r,
        }
    return data
