"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial in ``dim`` variables is a map from exponent tuples to nonzero Fractions.
The same type serves as numerator of a generating function (variables x1..xd), as the
polynomial part of an exponential polynomial (local coordinates m1..ms) and as the
truncated series container of the oracle.
"""

import functools
import itertools
from collections.abc import Iterable, Iterator, Mapping, Sequence
from fractions import Fraction
from typing import Optional, Union

Exponent = tuple[int, ...]
Scalar = Union[int, Fraction]


def in_bound(
    exponent: Exponent, bound: Optional[int], box: Optional[Exponent] = None
) -> bool:
    """Tells whether an exponent lies inside a total-degree bound and an optional box."""
    if bound is not None and sum(exponent) > bound:
        return False
    if box is not None and any(e > b for e, b in zip(exponent, box)):
        return False
    return True


class Poly:
    """Immutable sparse polynomial over the rationals."""

    __slots__ = ("dim", "_terms", "_hash")

    def __init__(self, dim: int, terms: Optional[Mapping[Exponent, Scalar]] = None):
        if dim < 0:
            raise ValueError(f"dim must be nonnegative, got {dim}.")
        self.dim = dim
        clean = {}
        for exponent, coeff in (terms or {}).items():
            exponent = tuple(exponent)
            if len(exponent) != dim:
                raise ValueError(
                    f"exponent {exponent} does not have {dim} coordinates."
                )
            if coeff:
                clean[exponent] = Fraction(coeff)
        self._terms = clean
        self._hash: Optional[int] = None

    @classmethod
    def zero(cls, dim: int) -> "Poly":
        return cls(dim)

    @classmethod
    def constant(cls, dim: int, value: Scalar) -> "Poly":
        return cls(dim, {(0,) * dim: value})

    @classmethod
    def one(cls, dim: int) -> "Poly":
        return cls.constant(dim, 1)

    @classmethod
    def monomial(cls, exponent: Iterable[int], coeff: Scalar = 1) -> "Poly":
        exponent = tuple(exponent)
        return cls(len(exponent), {exponent: coeff})

    @classmethod
    def variable(cls, dim: int, index: int) -> "Poly":
        exponent = [0] * dim
        exponent[index] = 1
        return cls.monomial(exponent)

    def items(self) -> Iterator[tuple[Exponent, Fraction]]:
        """Yields (exponent, coefficient) pairs in lexicographic exponent order."""
        for exponent in sorted(self._terms):
            yield exponent, self._terms[exponent]

    def support(self) -> list[Exponent]:
        return sorted(self._terms)

    def coefficient(self, exponent: Iterable[int]) -> Fraction:
        return self._terms.get(tuple(exponent), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.dim == other.dim and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(self.dim, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({self.dim}, {dict(self.items())!r})"

    def _coerce(self, other: Union["Poly", Scalar]) -> "Poly":
        if isinstance(other, Poly):
            if other.dim != self.dim:
                raise ValueError(
                    f"cannot combine polynomials in {self.dim} and {other.dim} "
                    "variables."
                )
            return other
        return Poly.constant(self.dim, other)

    def __add__(self, other: Union["Poly", Scalar]) -> "Poly":
        other = self._coerce(other)
        terms = dict(self._terms)
        for exponent, coeff in other._terms.items():
            terms[exponent] = terms.get(exponent, 0) + coeff
        return Poly(self.dim, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.dim, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Union["Poly", Scalar]) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Scalar) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other: Union["Poly", Scalar]) -> "Poly":
        if not isinstance(other, Poly):
            return Poly(self.dim, {e: c * other for e, c in self._terms.items()})
        return self.mul_truncated(other)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "Poly":
        if power < 0:
            raise ValueError("negative powers are not polynomials.")
        result = Poly.one(self.dim)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def mul_truncated(
        self,
        other: "Poly",
        bound: Optional[int] = None,
        box: Optional[Exponent] = None,
    ) -> "Poly":
        """Multiplies and drops every exponent outside the bound and the box."""
        other = self._coerce(other)
        terms: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exponent = tuple(a + b for a, b in zip(e1, e2))
                if in_bound(exponent, bound, box):
                    terms[exponent] = terms.get(exponent, 0) + c1 * c2
        return Poly(self.dim, terms)

    def truncate(self, bound: Optional[int], box: Optional[Exponent] = None) -> "Poly":
        return Poly(
            self.dim,
            {e: c for e, c in self._terms.items() if in_bound(e, bound, box)},
        )

    def shift(self, exponent: Exponent) -> "Poly":
        """Multiplies by the monomial with the given exponent."""
        return Poly(
            self.dim,
            {tuple(a + b for a, b in zip(e, exponent)): c for e, c in self._terms.items()},
        )

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def degree(self, index: int) -> int:
        return max((e[index] for e in self._terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.dim)

    def leading(self) -> tuple[Exponent, Fraction]:
        """Returns the lexicographically largest exponent and its coefficient."""
        exponent = max(self._terms)
        return exponent, self._terms[exponent]

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        total = Fraction(0)
        for exponent, coeff in self._terms.items():
            value = coeff
            for x, e in zip(point, exponent):
                if e:
                    value *= Fraction(x) ** e
            total += value
        return total

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Composes with the map sending variable i to images[i].

        All images must share one dimension, which becomes the dimension of the result.
        """
        if len(images) != self.dim:
            raise ValueError(f"expected {self.dim} images, got {len(images)}.")
        target = images[0].dim if images else 0
        powers: dict[tuple[int, int], Poly] = {}

        def power(index: int, exp: int) -> Poly:
            if (index, exp) not in powers:
                powers[index, exp] = images[index] ** exp
            return powers[index, exp]

        result = Poly.zero(target)
        for exponent, coeff in self._terms.items():
            term = Poly.constant(target, coeff)
            for index, exp in enumerate(exponent):
                if exp:
                    term = term * power(index, exp)
            result = result + term
        return result

    def with_dim(self, dim: int) -> "Poly":
        """Pads exponents with zeros up to ``dim`` variables."""
        if dim < self.dim:
            raise ValueError(f"cannot shrink a polynomial from {self.dim} to {dim}.")
        pad = (0,) * (dim - self.dim)
        return Poly(dim, {e + pad: c for e, c in self._terms.items()})


def affine(dim: int, constant: Scalar, linear: Sequence[Scalar]) -> Poly:
    """Returns constant + sum(linear[i] * y_i) as a polynomial in ``dim`` variables."""
    result = Poly.constant(dim, constant)
    for index, coeff in enumerate(linear):
        if coeff:
            result = result + Poly.variable(dim, index) * coeff
    return result


@functools.cache
def rising_binomial(k: int) -> Poly:
    """Returns binom(m + k - 1, m) = binom(m + k - 1, k - 1) as a polynomial in m.

    These are the coefficients of 1/(1 - u)^k; p_1 = 1, p_2 = m + 1, ...
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}.")
    m = Poly.variable(1, 0)
    result = Poly.one(1)
    for j in range(1, k):
        result = result * (m + j) * Fraction(1, j)
    return result


def embed_univariate(poly: Poly, dim: int, index: int) -> Poly:
    """Views a univariate polynomial as a polynomial in variable ``index`` of ``dim``."""
    terms = {}
    for (exp,), coeff in poly.items():
        exponent = [0] * dim
        exponent[index] = exp
        terms[tuple(exponent)] = coeff
    return Poly(dim, terms)


def product(polys: Iterable[Poly], dim: int) -> Poly:
    return functools.reduce(lambda a, b: a * b, polys, Poly.one(dim))


def box_points(upper: Sequence[int]) -> Iterator[Exponent]:
    """Yields every point of the box [0, upper_1] x ... x [0, upper_d]."""
    return itertools.product(*(range(u + 1) for u in upper))


def points_upto(dim: int, bound: int) -> Iterator[Exponent]:
    """Yields all points of N^dim with total degree at most ``bound``, lexicographically."""
    if dim == 0:
        yield ()
        return
    for first in range(bound + 1):
        for rest in points_upto(dim - 1, bound - first):
            yield (first,) + rest
