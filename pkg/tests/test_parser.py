from fractions import Fraction

import pytest

from bezivin.errors import InputError, ParseError
from bezivin.leinartas import Block, UnitProductRational
from bezivin.parser import NOT_UNIT_PRODUCT, RationalExpr, format_expr, from_file, from_str
from bezivin.polys import Poly


def test_from_str_catalan(catalan):
    expr = catalan
    assert isinstance(expr, RationalExpr)
    assert expr.dim == 2
    assert expr.text.startswith("1/((1-3*x1)*(1-x2)) - ")
    assert expr.terms == (
        UnitProductRational(2, Poly.one(2), (Block((1, 0), 3), Block((0, 1), 1))),
        UnitProductRational(2, -Poly.one(2), (Block((1, 0), 1), Block((0, 1), 2))),
        UnitProductRational(2, -Poly.one(2), (Block((1, 0), 1), Block((0, 1), 1))),
    )
    assert expr.spans[:2] == ((1, 1), (1, 23))


@pytest.mark.parametrize(
    "text, expected",
    [
        ("3", UnitProductRational(1, Poly.constant(1, 3))),
        ("-x1/(1-x1)", UnitProductRational(1, Poly.monomial((1,), -1), (Block((1,), 1),))),
        ("1/(1+x1)", UnitProductRational(1, Poly.one(1), (Block((1,), -1),))),
        (
            "x1^2*x2/(1-1/2*x1*x2)^3",
            UnitProductRational(
                2, Poly.monomial((2, 1)), (Block((1, 1), Fraction(1, 2), 3),)
            ),
        ),
        (
            "(2*x1 - x2)/(1-x1)",
            UnitProductRational(
                2, Poly(2, {(1, 0): 2, (0, 1): -1}), (Block((1, 0), 1),)
            ),
        ),
        (
            "(-1/3 + x1)/(1 - -2*x1)",
            UnitProductRational(
                1, Poly(1, {(0,): Fraction(-1, 3), (1,): 1}), (Block((1,), -2),)
            ),
        ),
        (
            "1/((1-x1)*(1-x1)^2)",
            UnitProductRational(1, Poly.one(1), (Block((1,), 1, 3),)),
        ),
    ],
)
def test_from_str_single(text, expected):
    (term,) = from_str(text).terms
    assert term == expected


def test_from_str_unused_lower_variable():
    expr = from_str("1/(1-x3)")
    assert expr.dim == 3
    assert expr.terms[0].blocks == (Block((0, 0, 1), 1),)


def test_from_str_without_outer_parentheses():
    assert from_str("1/(1-x1)*(1-x2)").terms == from_str("1/((1-x1)*(1-x2))").terms


def test_from_str_multiline():
    expr = from_str("1/(1-x1)\n  + x2/(1-x2)")
    assert len(expr.terms) == 2
    assert expr.spans == ((1, 1), (2, 5))


def test_from_str_piecewise_example(piecewise_example):
    expr = piecewise_example
    assert expr.dim == 2
    assert len(expr.terms) == 4
    assert expr.terms[2].blocks == (Block((0, 1), 5), Block((1, 1), 3, 2))


@pytest.mark.parametrize(
    "text, column, message",
    [
        ("1/(1-x1-x2)", 8, NOT_UNIT_PRODUCT),
        ("1/(2-x1)", 4, NOT_UNIT_PRODUCT),
        ("1/(1-3)", 7, NOT_UNIT_PRODUCT),
        ("1/(1-0*x1)", 6, NOT_UNIT_PRODUCT),
        ("1/(1-x1^0)", 1, NOT_UNIT_PRODUCT),
        ("1/x1", 3, NOT_UNIT_PRODUCT),
        ("1/(2*x1)", 4, NOT_UNIT_PRODUCT),
        ("1/(1-x1)^0", 11, "multiplicities must be positive"),
        ("1/(1-x0)", 6, "numbered from x1"),
        ("1/(1-x1) y", 10, "unexpected character 'y'"),
        ("1/(1-x1) 2", 10, "or the end of the expression"),
        ("1 + ", 5, "expected a natural number"),
        ("1/(1-1/0*x1)", 8, "zero denominator"),
    ],
)
def test_from_str_errors(text, column, message):
    with pytest.raises(ParseError, match=message) as info:
        from_str(text)
    assert info.value.line == 1
    assert info.value.column == column


def test_from_str_integer_quotient_then_term():
    expr = from_str("1/1-x1")
    assert len(expr.terms) == 2
    assert expr.terms[0].numerator == 1
    assert expr.terms[0].blocks == ()
    assert expr.terms[1].numerator == Poly.monomial((1,), -1)


def test_from_str_error_line():
    with pytest.raises(ParseError) as info:
        from_str("1/(1-x1)\n+ 1/(1-x1-x2)")
    assert (info.value.line, info.value.column) == (2, 10)


def test_from_str_empty():
    with pytest.raises(ParseError, match="empty expression"):
        from_str("   ")


def test_parse_error_render():
    with pytest.raises(ParseError) as info:
        from_str("1/(1-x1-x2)")
    error = info.value
    assert isinstance(error, InputError)
    assert error.exit_code == 2
    assert error.render().endswith("\n  1/(1-x1-x2)\n" + " " * 9 + "^")
    assert error.render().startswith(NOT_UNIT_PRODUCT)


def test_from_file(tmp_path, catalan):
    path = tmp_path / "catalan.txt"
    path.write_text(catalan.text + "\n")
    assert from_file(path).terms == catalan.terms


@pytest.mark.parametrize(
    "text, expected",
    [
        ("-x1/(1-x1)", "-x1/(1-x1)"),
        ("3*x1^2/(1+x2)^2", "3*x1^2/(1+x2)^2"),
        ("5", "5"),
        ("1/(1-1/2*x1)", "1/(1-1/2*x1)"),
    ],
)
def test_format_expr(text, expected):
    assert format_expr(from_str(text)) == expected


@pytest.mark.parametrize(
    "text",
    [
        "1/((1-3*x1)*(1-x2)) - 1/((1-x1)*(1-2*x2)) - 1/((1-x1)*(1-x2))",
        "1/(1-2*x1*x2) + x2/((1-3*x1*x2)^2*(1-5*x2)) + x1/((1-x1)*(1-x1*x2))",
        "(2*x1 - x2 + 1/3)/((1-x1)^2*(1+3*x1*x2))",
        "-(x1 - x2)/(1-x1*x2)^2 + 7",
    ],
)
def test_format_expr_round_trip(text):
    expr = from_str(text)
    assert from_str(format_expr(expr)).terms == expr.terms


def test_format_expr_single_term():
    (term,) = from_str("1/((1-x1)*(1-2*x2))").terms
    assert from_str(format_expr(term)).terms == (term,)
