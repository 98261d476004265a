"""Loads sums of unit-product rational functions from text.

Expressions follow this grammar (whitespace is ignored):

    input   := ['-'] frac (('+' | '-') frac)*
    frac    := poly ['/' denom]
    denom   := dfactor {'*' dfactor} | '(' dfactor {'*' dfactor} ')'
    dfactor := '(' '1' ('-' | '+') [coef '*'] mono ')' ['^' nat]
    mono    := var ['^' nat] {'*' var ['^' nat]}
    var     := 'x' nat
    coef    := ['-'] nat ['/' nat]
    poly    := term | '(' ['-'] term (('+' | '-') term)* ')'
    term    := coef ['*' mono] | mono

Here is the Catalan-type example:

    1/((1-3*x1)*(1-x2)) - 1/((1-x1)*(1-2*x2)) - 1/((1-x1)*(1-x2))

The dimension is the largest variable index; unused lower indices are allowed.
"""

import dataclasses
import pathlib
from collections.abc import Iterator
from fractions import Fraction
from typing import NamedTuple, Optional, Union

from .errors import ParseError
from .exactnum import format_rational
from .leinartas import Block, UnitProductRational
from .patterns import TOKEN_PATTERN
from .polys import Poly

NOT_UNIT_PRODUCT = "denominator not unit-product"


class Token(NamedTuple):
    kind: str
    value: str
    line: int
    column: int


Monomial = dict[int, int]


@dataclasses.dataclass(frozen=True)
class RationalExpr:
    """A parsed sum of unit-product fractions with the source span of each summand."""

    dim: int
    terms: tuple[UnitProductRational, ...]
    spans: tuple[tuple[int, int], ...] = ()
    text: str = ""


def _tokenize(text: str) -> Iterator[Token]:
    line, line_start = 1, 0
    for match in TOKEN_PATTERN.finditer(text):
        kind, value = match.lastgroup, match.group()
        column = match.start() - line_start + 1
        if kind == "NEWLINE":
            line, line_start = line + 1, match.end()
            continue
        if kind == "SKIP":
            continue
        if kind == "MISMATCH":
            raise ParseError(text, line, column, f"unexpected character {value!r}")
        yield Token(kind, value, line, column)


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = list(_tokenize(text))
        self.pos = 0

    def peek(self, offset: int = 0) -> Optional[Token]:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def at(self, value: str, offset: int = 0) -> bool:
        token = self.peek(offset)
        return token is not None and token.value == value

    def error(self, message: str, token: Optional[Token] = None) -> ParseError:
        token = token or self.peek()
        if token is None:
            lines = self.text.splitlines() or [""]
            return ParseError(self.text, len(lines), len(lines[-1]) + 1, message)
        return ParseError(self.text, token.line, token.column, message)

    def advance(self, value: Optional[str] = None, message: Optional[str] = None) -> Token:
        token = self.peek()
        if token is None or (value is not None and token.value != value):
            expected = f"expected '{value}'" if value else "unexpected end of input"
            raise self.error(message or expected)
        self.pos += 1
        return token

    def nat(self, message: Optional[str] = None) -> int:
        token = self.peek()
        if token is None or token.kind != "NUMBER":
            raise self.error(message or "expected a natural number")
        self.pos += 1
        return int(token.value)

    def coef(self) -> Fraction:
        negative = False
        if self.at("-"):
            self.advance()
            negative = True
        value = Fraction(self.nat())
        if self.at("/") and self.peek(1) is not None and self.peek(1).kind == "NUMBER":
            self.advance()
            token = self.peek()
            den = self.nat()
            if den == 0:
                raise self.error("zero denominator", token)
            value /= den
        return -value if negative else value

    def mono(self) -> Monomial:
        exponents: Monomial = {}
        while True:
            token = self.peek()
            if token is None or token.kind != "VAR":
                raise self.error("expected a variable x1, x2, ...")
            self.advance()
            index = int(token.value[1:])
            if index < 1:
                raise self.error("variables are numbered from x1", token)
            power = 1
            if self.at("^"):
                self.advance()
                power = self.nat()
            exponents[index] = exponents.get(index, 0) + power
            if self.at("*") and self.peek(1) is not None and self.peek(1).kind == "VAR":
                self.advance()
                continue
            return exponents

    def term(self) -> tuple[Fraction, Monomial]:
        token = self.peek()
        if token is not None and token.kind == "VAR":
            return Fraction(1), self.mono()
        coeff = self.coef()
        if self.at("*") and self.peek(1) is not None and self.peek(1).kind == "VAR":
            self.advance()
            return coeff, self.mono()
        return coeff, {}

    def poly(self) -> list[tuple[Fraction, Monomial]]:
        if not self.at("("):
            return [self.term()]
        self.advance()
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        terms = []
        coeff, mono = self.term()
        terms.append((sign * coeff, mono))
        while self.at("+") or self.at("-"):
            sign = 1 if self.advance().value == "+" else -1
            coeff, mono = self.term()
            terms.append((sign * coeff, mono))
        self.advance(")")
        return terms

    def dfactor(self) -> tuple[Fraction, Monomial, int]:
        self.advance("(", NOT_UNIT_PRODUCT)
        token = self.peek()
        if token is None or token.value != "1":
            raise self.error(f"{NOT_UNIT_PRODUCT}: factors must start with 1", token)
        self.advance()
        if not (self.at("-") or self.at("+")):
            raise self.error(f"{NOT_UNIT_PRODUCT}: expected 1 - c*monomial")
        sign = 1 if self.advance().value == "-" else -1
        coeff = Fraction(1)
        token = self.peek()
        if token is not None and token.kind != "VAR":
            coeff = self.coef()
            self.advance("*", f"{NOT_UNIT_PRODUCT}: expected '*' before the monomial")
        mono = self.mono()
        self.advance(")", f"{NOT_UNIT_PRODUCT}: a factor holds a single monomial")
        mult = 1
        if self.at("^"):
            self.advance()
            mult = self.nat()
            if mult < 1:
                raise self.error("multiplicities must be positive")
        if coeff == 0:
            raise self.error(f"{NOT_UNIT_PRODUCT}: zero constant", token)
        return sign * coeff, mono, mult

    def denom(self) -> list[tuple[Fraction, Monomial, int]]:
        outer = self.at("(") and self.at("(", 1)
        if outer:
            self.advance()
        factors = [self.dfactor()]
        while self.at("*"):
            self.advance()
            factors.append(self.dfactor())
        if outer:
            self.advance(")", NOT_UNIT_PRODUCT)
        return factors

    def frac(self):
        numerator = self.poly()
        factors = []
        if self.at("/"):
            self.advance()
            factors = self.denom()
        return numerator, factors

    def parse(self):
        if not self.tokens:
            raise self.error("empty expression")
        fracs = []
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        while True:
            start = self.peek()
            numerator, factors = self.frac()
            fracs.append((sign, numerator, factors, start))
            if self.peek() is None:
                return fracs
            if not (self.at("+") or self.at("-")):
                raise self.error("expected '+', '-' or the end of the expression")
            sign = 1 if self.advance().value == "+" else -1


def _exponent(mono: Monomial, dim: int) -> tuple[int, ...]:
    return tuple(mono.get(i + 1, 0) for i in range(dim))


def from_str(text: str) -> RationalExpr:
    """Parses an expression into its unit-product summands.

    Raises:
      ParseError: With line and column on syntax errors, including denominators that are
        not products of factors (1 - c*monomial).
    """
    parser = _Parser(text)
    fracs = parser.parse()
    indices = [
        i
        for _, numerator, factors, _ in fracs
        for mono in [m for _, m in numerator] + [m for _, m, _ in factors]
        for i in mono
    ]
    dim = max(indices, default=1)
    terms, spans = [], []
    for sign, numerator, factors, start in fracs:
        poly = Poly(dim, {})
        for coeff, mono in numerator:
            poly = poly + Poly.monomial(_exponent(mono, dim), sign * coeff)
        blocks = []
        for c, mono, mult in factors:
            exponent = _exponent(mono, dim)
            if not any(exponent):
                raise parser.error(f"{NOT_UNIT_PRODUCT}: constant factor", start)
            blocks.append(Block(exponent, c, mult))
        terms.append(UnitProductRational(dim, poly, tuple(blocks)))
        spans.append((start.line, start.column))
    return RationalExpr(dim, tuple(terms), tuple(spans), text)


def from_file(path: Union[str, pathlib.Path]) -> RationalExpr:
    """Parses an expression stored in a file."""
    return from_str(pathlib.Path(path).read_text())


def _format_monomial(exponent: tuple[int, ...]) -> str:
    parts = [
        f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(exponent) if e
    ]
    return "*".join(parts)


def _format_term(coeff: Fraction, exponent: tuple[int, ...]) -> str:
    mono = _format_monomial(exponent)
    if not mono:
        return format_rational(coeff)
    if coeff == 1:
        return mono
    return f"{format_rational(coeff)}*{mono}"


def _format_fraction(r: UnitProductRational) -> tuple[int, str]:
    items = list(r.numerator.items())
    if len(items) == 1:
        exponent, coeff = items[0]
        sign = -1 if coeff < 0 else 1
        text = _format_term(abs(coeff), exponent)
    else:
        sign = 1
        text = ""
        for index, (exponent, coeff) in enumerate(items):
            term = _format_term(abs(coeff), exponent)
            if index == 0:
                text = f"-{term}" if coeff < 0 else term
            else:
                text += f" - {term}" if coeff < 0 else f" + {term}"
        text = f"({text})" if items else "0"
    if r.blocks:
        factors = []
        for block in r.blocks:
            c = block.c
            op = "-" if c > 0 else "+"
            scale = "" if abs(c) == 1 else f"{format_rational(abs(c))}*"
            factor = f"(1{op}{scale}{_format_monomial(block.e)})"
            factors.append(factor if block.mult == 1 else f"{factor}^{block.mult}")
        text += "/" + (f"({'*'.join(factors)})" if len(factors) > 1 else factors[0])
    return sign, text


def format_expr(expr: Union[RationalExpr, UnitProductRational]) -> str:
    """Prints summands in the input grammar; parsing the output gives the same terms."""
    terms = expr.terms if isinstance(expr, RationalExpr) else (expr,)
    out = ""
    for index, term in enumerate(terms):
        sign, text = _format_fraction(term)
        if index == 0:
            out = f"-{text}" if sign < 0 else text
        else:
            out += f" - {text}" if sign < 0 else f" + {text}"
    return out or "0"
