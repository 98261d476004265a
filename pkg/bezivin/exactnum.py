"""Exact rationals in signed prime-exponent form and finitely generated subgroups of Q*.

A subgroup G = <g_1, ..., g_t> of Q* is described by the integer matrix whose column j is
the exponent vector of g_j over the primes of G, plus one sign row holding the sign of
g_j as a residue mod 2. Membership questions become integer linear systems; the mod 2
sign row is lifted to Z with an auxiliary variable carrying coefficient -2.
"""

import dataclasses
import functools
import logging
import math
from collections.abc import Iterable, Sequence
from fractions import Fraction
from typing import Optional, Union

import sympy

from . import intlat
from .errors import CapabilityError, InputError
from .patterns import RATIONAL_PATTERN, VECTOR_SEPARATOR_PATTERN
from .settings import DEFAULT_LIMITS

logger = logging.getLogger(__name__)

RationalLike = Union[int, str, Fraction]


def to_fraction(value: RationalLike) -> Fraction:
    """Converts ints, Fractions and text literals ``a``, ``-a``, ``a/b`` to a Fraction.

    Raises:
      InputError: If a text literal is malformed or has a zero denominator.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    match = RATIONAL_PATTERN.match(value)
    if not match:
        raise InputError(f'"{value}" is not a rational literal of the form a or a/b.')
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise InputError(f'"{value}" has a zero denominator.')
    return Fraction(int(num), int(den) if den else 1)


def format_rational(value: Fraction) -> str:
    """Formats a Fraction as ``a`` or ``a/b``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclasses.dataclass(frozen=True)
class FactoredRational:
    """A nonzero rational as sign times a product of prime powers."""

    sign: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}.")
        primes = [p for p, _ in self.factors]
        if len(set(primes)) != len(primes) or any(e == 0 for _, e in self.factors):
            raise ValueError("factors must have distinct primes and nonzero exponents.")

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def exponent(self, prime: int) -> int:
        return self.as_dict().get(prime, 0)

    def primes(self) -> frozenset[int]:
        return frozenset(p for p, _ in self.factors)

    def value(self) -> Fraction:
        result = Fraction(self.sign)
        for prime, exp in self.factors:
            result *= Fraction(prime) ** exp
        return result

    def __mul__(self, other: "FactoredRational") -> "FactoredRational":
        exps = self.as_dict()
        for prime, exp in other.factors:
            exps[prime] = exps.get(prime, 0) + exp
        return _factored(self.sign * other.sign, exps)

    def __pow__(self, power: int) -> "FactoredRational":
        if power == 0:
            return FactoredRational(1, ())
        return _factored(
            self.sign**power, {p: e * power for p, e in self.factors}
        )


def _factored(sign: int, exps: dict[int, int]) -> FactoredRational:
    return FactoredRational(
        sign, tuple(sorted((p, e) for p, e in exps.items() if e))
    )


@functools.lru_cache(maxsize=4096)
def _factor_positive(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(sympy.factorint(n).items()))


def factor_rational(q: RationalLike, limit: Optional[int] = None) -> FactoredRational:
    """Returns the exact signed prime factorization of a nonzero rational.

    Args:
      q: The rational to factor.
      limit: Numerators and denominators at or above this value are rejected; defaults to
        the configured factor limit (2**64).

    Returns:
      A FactoredRational, for instance -8/9 gives (-1, ((2, 3), (3, -2))).

    Raises:
      InputError: If q is zero.
      CapabilityError: If the reduced numerator or denominator is too large.
    """
    q = to_fraction(q)
    if q == 0:
        raise InputError("0 has no prime factorization.")
    limit = DEFAULT_LIMITS.factor_limit if limit is None else limit
    num, den = abs(q.numerator), q.denominator
    if num >= limit or den >= limit:
        raise CapabilityError(f"{format_rational(q)} exceeds the factorization limit.")
    exps = dict(_factor_positive(num))
    for prime, exp in _factor_positive(den):
        exps[prime] = exps.get(prime, 0) - exp
    return _factored(1 if q > 0 else -1, exps)


class GroupSpec:
    """A finitely generated subgroup of Q* given by generators."""

    __slots__ = ("generators", "primes", "matrix", "_factored")

    def __init__(self, generators: Iterable[RationalLike]) -> None:
        gens = tuple(to_fraction(g) for g in generators)
        if not gens:
            raise InputError("a group needs at least one generator.")
        if any(g == 0 for g in gens):
            raise InputError("0 cannot generate a subgroup of Q*.")
        self.generators = gens
        self._factored = tuple(factor_rational(g) for g in gens)
        self.primes = tuple(sorted(set().union(*(f.primes() for f in self._factored))))
        rows = [[f.exponent(p) for f in self._factored] for p in self.primes]
        rows.append([0 if f.sign > 0 else 1 for f in self._factored])
        self.matrix = intlat.IntMatrix.from_rows(rows, cols=len(gens))

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """Parses the CLI form ``"g1,g2,..."``."""
        parts = [p for p in VECTOR_SEPARATOR_PATTERN.split(text.strip()) if p]
        return cls(parts)

    def __repr__(self) -> str:
        return "GroupSpec(<{}>)".format(", ".join(map(format_rational, self.generators)))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroupSpec) and self.generators == other.generators

    def __hash__(self) -> int:
        return hash(self.generators)

    def _target(self, g: FactoredRational) -> Optional[list[int]]:
        if not g.primes() <= set(self.primes):
            return None
        return [g.exponent(p) for p in self.primes] + [0 if g.sign > 0 else 1]

    def _lifted_matrix(self) -> intlat.IntMatrix:
        rows = self.matrix.to_rows()
        for row in rows[:-1]:
            row.append(0)
        rows[-1].append(-2)
        return intlat.IntMatrix.from_rows(rows, cols=len(self.generators) + 1)

    def certificate(self, g: FactoredRational) -> Optional[tuple[int, ...]]:
        target = self._target(g)
        if target is None:
            return None
        solution = intlat.solve_integer(self._lifted_matrix(), target)
        if solution is None:
            return None
        return tuple(solution[:-1])


def group_member(g: RationalLike, group: GroupSpec) -> Optional[tuple[int, ...]]:
    """Decides whether g lies in the group and returns an exponent certificate.

    Args:
      g: A nonzero rational.
      group: The group.

    Returns:
      Exponents (k_1, ..., k_t) with prod(gen_i ** k_i) == g, or None. For G = <2, 3>,
      12 gives (2, 1) while -6 and 5/4 give None.

    Raises:
      InputError: If g is zero.
    """
    certificate = group.certificate(factor_rational(g))
    if certificate is not None:
        assert evaluate_certificate(group, certificate) == to_fraction(g)
    return certificate


def evaluate_certificate(group: GroupSpec, certificate: Sequence[int]) -> Fraction:
    result = Fraction(1)
    for gen, exp in zip(group.generators, certificate):
        result *= gen**exp
    return result


def root_power_member(c: RationalLike, group: GroupSpec) -> Optional[int]:
    """Returns the least N >= 1 with c**N in the group, or None if there is none.

    The exponent vector of c (sign included) is written over a basis of the lattice
    spanned by the generator columns and by 2 times the sign axis; N is the common
    denominator of its rational coordinates, and None means c is outside the rational span.
    """
    fc = factor_rational(c)
    target = group._target(fc)
    if target is None:
        return None
    columns = group.matrix.to_columns()
    sign_axis = [0] * len(group.primes) + [2]
    coords = intlat.rational_coordinates(columns + [sign_axis], target)
    if coords is None:
        return None
    n = math.lcm(*(q.denominator for q in coords)) if coords else 1
    if group_member(to_fraction(c) ** n, group) is None:
        raise AssertionError(f"c**{n} should be a member of {group!r}.")
    return n


def torsion_quotient(c: RationalLike, c_prime: RationalLike) -> Optional[int]:
    """Returns the order of c/c' as a root of unity: 1, 2 or None over Q."""
    c, c_prime = to_fraction(c), to_fraction(c_prime)
    if c == 0 or c_prime == 0:
        raise InputError("torsion quotients need nonzero constants.")
    if c == c_prime:
        return 1
    if c == -c_prime:
        return 2
    return None


def rational_root(value: Fraction, n: int) -> Optional[Fraction]:
    """Returns the real rational n-th root of value when it exists."""
    value = Fraction(value)
    if value < 0 and n % 2 == 0:
        return None
    num, exact_num = sympy.integer_nthroot(abs(value.numerator), n)
    den, exact_den = sympy.integer_nthroot(value.denominator, n)
    if not (exact_num and exact_den):
        return None
    root = Fraction(int(num), int(den))
    return -root if value < 0 else root


def rational_power(value: Fraction, exponent: Fraction) -> Optional[Fraction]:
    """Returns value**exponent for a rational exponent when the result is rational."""
    exponent = Fraction(exponent)
    root = rational_root(value, exponent.denominator)
    if root is None:
        return None
    return root**exponent.numerator


def parse_vector(text: str) -> tuple[int, ...]:
    """Parses ``"a1,...,ad"`` into a tuple of integers."""
    try:
        return tuple(int(p) for p in VECTOR_SEPARATOR_PATTERN.split(text.strip()) if p)
    except ValueError as e:
        raise InputError(f'"{text}" is not a comma separated integer vector.') from e
