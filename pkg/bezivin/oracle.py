"""Brute-force ground truth: truncated power-series arithmetic over Q.

Every construction in the package is cross-checked against the series computed here by
plain geometric expansion and truncated multiplication.
"""

import dataclasses
import logging
import math
from collections.abc import Iterable, Iterator, Sequence
from fractions import Fraction
from typing import NamedTuple, Optional, Union

from .base import CoefficientSource, UnitProductProto
from .errors import CapabilityError, InputError
from .polys import Exponent, Poly, box_points, in_bound, points_upto
from .settings import Limits, resolve

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class TruncatedSeries:
    """The coefficients of a power series up to a total degree and/or a box.

    Absent exponents inside the truncation have coefficient 0.
    """

    dim: int
    bound: Optional[int]
    poly: Poly
    box: Optional[Exponent] = None

    def __post_init__(self) -> None:
        if self.bound is None and self.box is None:
            raise InputError("a truncated series needs a total-degree bound or a box.")
        if self.box is not None and len(self.box) != self.dim:
            raise InputError(f"box {self.box} does not have {self.dim} coordinates.")
        object.__setattr__(self, "poly", self.poly.truncate(self.bound, self.box))

    @classmethod
    def zero(cls, dim: int, bound: int) -> "TruncatedSeries":
        return cls(dim, bound, Poly.zero(dim))

    def contains(self, n: Sequence[int]) -> bool:
        return len(n) == self.dim and in_bound(tuple(n), self.bound, self.box)

    def coefficient(self, n: Sequence[int]) -> Fraction:
        if not self.contains(n):
            raise InputError(f"exponent {tuple(n)} lies outside the truncation.")
        return self.poly.coefficient(tuple(n))

    def items(self) -> Iterator[tuple[Exponent, Fraction]]:
        """Nonzero coefficients in lexicographic order."""
        return self.poly.items()

    def points(self) -> Iterator[Exponent]:
        """Every exponent inside the truncation, lexicographically."""
        if self.bound is None:
            yield from box_points(self.box)
            return
        for n in points_upto(self.dim, self.bound):
            if in_bound(n, None, self.box):
                yield n

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return add(self, other)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return multiply(self, other)


class Mismatch(NamedTuple):
    n: Exponent
    left: Fraction
    right: Fraction


def _common(f1: TruncatedSeries, f2: TruncatedSeries) -> tuple[Optional[int], Optional[Exponent]]:
    if f1.dim != f2.dim:
        raise InputError(f"series dimensions differ: {f1.dim} and {f2.dim}.")
    bounds = [b for b in (f1.bound, f2.bound) if b is not None]
    boxes = [b for b in (f1.box, f2.box) if b is not None]
    bound = min(bounds) if bounds else None
    box = tuple(map(min, zip(*boxes))) if boxes else None
    return bound, box


def geometric(
    c: Fraction,
    e: Exponent,
    mult: int = 1,
    *,
    bound: Optional[int],
    box: Optional[Exponent] = None,
) -> Poly:
    """Truncation of 1/(1 - c x^e)^mult = sum_k binom(k + mult - 1, k) c^k x^(k e)."""
    terms = {}
    k = 0
    while True:
        exponent = tuple(k * x for x in e)
        if not in_bound(exponent, bound, box):
            break
        terms[exponent] = math.comb(k + mult - 1, k) * Fraction(c) ** k
        k += 1
    return Poly(len(e), terms)


def truncation_size(dim: int, bound: Optional[int], box: Optional[Exponent] = None) -> int:
    """Number of exponents inside a total-degree bound and/or a box."""
    sizes = []
    if bound is not None:
        sizes.append(math.comb(bound + dim, dim) if bound >= 0 else 0)
    if box is not None:
        sizes.append(math.prod(max(b + 1, 0) for b in box))
    return min(sizes)


def expand_rational(
    r: Union[UnitProductProto, Iterable[UnitProductProto]],
    bound: Optional[int] = None,
    *,
    dim: Optional[int] = None,
    box: Optional[Exponent] = None,
    limits: Optional[Limits] = None,
) -> TruncatedSeries:
    """Expands a unit-product rational function (or a sum of them) at the origin.

    Args:
      r: One rational function or an iterable of summands.
      bound: Total-degree bound; defaults to the configured bound unless a box is given.
      dim: Dimension of the result, required only for an empty sum.
      box: Optional per-axis bounds.
      limits: Provides the default bound and the frontier cap on the number of
        coefficients.

    Returns:
      Exact coefficients of the expansion up to the truncation. For example
      1/((1-x1)(1-x2)(1-x1 x2)) has coefficient 3 at (2, 2).
    """
    limits = resolve(limits)
    if bound is None and box is None:
        bound = limits.bound
    terms = [r] if hasattr(r, "blocks") else list(r)
    if dim is None:
        if not terms:
            raise InputError("the dimension of an empty sum must be given.")
        dim = terms[0].dim
    size = truncation_size(dim, bound, box)
    if size > limits.frontier_cap:
        raise CapabilityError(
            f"expansion would hold {size} coefficients, above the frontier cap of "
            f"{limits.frontier_cap}."
        )
    total = Poly.zero(dim)
    for term in terms:
        if term.dim != dim:
            raise InputError(f"summand of dimension {term.dim} in a sum of dimension {dim}.")
        series = term.numerator.truncate(bound, box)
        for block in term.blocks:
            if not block.c or not any(block.e):
                raise InputError(f"block (1 - {block.c} x^{block.e}) is degenerate.")
            factor = geometric(block.c, block.e, block.mult, bound=bound, box=box)
            series = series.mul_truncated(factor, bound, box)
        total = total + series
    logger.debug("Expanded %d summand(s) to %d nonzero coefficients", len(terms), len(total))
    return TruncatedSeries(dim, bound, total, box)


def from_source(
    source: CoefficientSource, bound: int, *, box: Optional[Exponent] = None
) -> TruncatedSeries:
    """Tabulates any coefficient source inside a truncation."""
    shell = TruncatedSeries(source.dim, bound, Poly.zero(source.dim), box)
    terms = {n: source.coefficient(n) for n in shell.points()}
    return TruncatedSeries(source.dim, bound, Poly(source.dim, terms), box)


def hadamard_product(f1: TruncatedSeries, f2: TruncatedSeries) -> TruncatedSeries:
    """Coefficientwise product over the common truncation."""
    bound, box = _common(f1, f2)
    terms = {n: c * f2.poly.coefficient(n) for n, c in f1.items()}
    return TruncatedSeries(f1.dim, bound, Poly(f1.dim, terms), box)


def hadamard_subinverse(f: TruncatedSeries) -> TruncatedSeries:
    """Coefficientwise reciprocal, keeping zero coefficients at zero."""
    return TruncatedSeries(f.dim, f.bound, Poly(f.dim, {n: 1 / c for n, c in f.items()}), f.box)


def compare(f1: TruncatedSeries, f2: TruncatedSeries) -> Optional[Mismatch]:
    """Returns the lexicographically first coefficient where the series differ, if any."""
    bound, box = _common(f1, f2)
    keys = {n for n, _ in f1.items()} | {n for n, _ in f2.items()}
    for n in sorted(k for k in keys if in_bound(k, bound, box)):
        left, right = f1.poly.coefficient(n), f2.poly.coefficient(n)
        if left != right:
            return Mismatch(n, left, right)
    return None


def add(f1: TruncatedSeries, f2: TruncatedSeries) -> TruncatedSeries:
    bound, box = _common(f1, f2)
    return TruncatedSeries(f1.dim, bound, f1.poly + f2.poly, box)


def scale(f: TruncatedSeries, factor: Union[int, Fraction]) -> TruncatedSeries:
    return TruncatedSeries(f.dim, f.bound, f.poly * Fraction(factor), f.box)


def multiply(f1: TruncatedSeries, f2: TruncatedSeries) -> TruncatedSeries:
    """Truncated Cauchy product."""
    bound, box = _common(f1, f2)
    return TruncatedSeries(f1.dim, bound, f1.poly.mul_truncated(f2.poly, bound, box), box)


def zero_scan(f: TruncatedSeries) -> list[Exponent]:
    """Lists every exponent inside the truncation whose coefficient vanishes."""
    return [n for n in f.points() if not f.poly.coefficient(n)]
