"""Multivariate P-recursive systems.

A system of size k on N^d has, for every coordinate j, a recurrence

    sum over a in [0, k]^d of Q_{j,a}(n_j) f(n - a) = 0   for all n in N_{>=k}^d,

together with sections (systems in d - 1 variables describing f with one coordinate
fixed below k) and initial values.
"""

import dataclasses
import logging
from collections.abc import Mapping, Sequence
from fractions import Fraction
from typing import NamedTuple, Optional

import sympy

from . import oracle
from .base import CoefficientSource
from .errors import CapabilityError, InputError, VerificationError
from .leinartas import UnitProductRational
from .polys import Exponent, Poly, points_upto
from .settings import Limits, default_limits

logger = logging.getLogger(__name__)

Recursion = tuple[tuple[Exponent, Poly], ...]


@dataclasses.dataclass(frozen=True)
class PRecursiveSystem:
    dim: int
    size: int
    recursions: tuple[Recursion, ...]
    sections: Mapping[tuple[int, int], "PRecursiveSystem"] = dataclasses.field(
        default_factory=dict
    )
    initial: Mapping[Exponent, Fraction] = dataclasses.field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.dim < 1 or self.size < 0:
            raise InputError(f"invalid system shape d={self.dim}, k={self.size}.")
        if len(self.recursions) != self.dim:
            raise InputError(f"expected {self.dim} recursions, got {len(self.recursions)}.")
        recursions = []
        for j, recursion in enumerate(self.recursions):
            clean = []
            for a, q in recursion:
                a = tuple(a)
                if len(a) != self.dim or any(x < 0 or x > self.size for x in a):
                    raise InputError(f"shift {a} is outside [0, {self.size}]^{self.dim}.")
                if q.dim != 1:
                    raise InputError("recursion coefficients must be univariate polynomials.")
                if q:
                    clean.append((a, q))
            if not clean:
                raise InputError(f"recursion {j + 1} has no nonzero coefficient.")
            recursions.append(tuple(sorted(clean, key=lambda item: item[0])))
        for (axis, value), section in self.sections.items():
            if self.dim == 1:
                raise InputError("one-dimensional systems have no sections.")
            if not (0 <= axis < self.dim and 0 <= value < self.size):
                raise InputError(f"section ({axis}, {value}) is out of range.")
            if section.dim != self.dim - 1:
                raise InputError(f"section ({axis}, {value}) must have dimension {self.dim - 1}.")
        object.__setattr__(self, "recursions", tuple(recursions))
        object.__setattr__(
            self,
            "initial",
            {tuple(n): Fraction(c) for n, c in self.initial.items()},
        )

    def evaluate(self, n: Sequence[int], *, axis: int = 0) -> Fraction:
        return evaluate(self, n, axis=axis)


def _order(axis: int, dim: int) -> list[int]:
    return [axis] + [i for i in range(dim) if i != axis]


def _pivot(recursion: Recursion, order: list[int]) -> tuple[Exponent, Poly]:
    return min(recursion, key=lambda item: [item[0][i] for i in order])


class _Session:
    """Memo tables of one evaluation, one per (sub)system."""

    def __init__(self, axis: int) -> None:
        self.axis = axis
        self.memo: dict[int, dict[Exponent, Fraction]] = {}

    def table(self, system: PRecursiveSystem) -> dict[Exponent, Fraction]:
        return self.memo.setdefault(id(system), {})

    def run(self, system: PRecursiveSystem, target: Exponent) -> Fraction:
        table = self.table(system)
        axis = self.axis if self.axis < system.dim else 0
        order = _order(axis, system.dim)
        recursion = system.recursions[axis]
        a_star, q_star = _pivot(recursion, order)
        others = [item for item in recursion if item[0] != a_star]
        stack = [target]
        while stack:
            n = stack[-1]
            if n in table:
                stack.pop()
                continue
            if any(x < 0 for x in n):
                table[n] = Fraction(0)
                continue
            if n in system.initial:
                table[n] = system.initial[n]
                continue
            shifted = tuple(x + a for x, a in zip(n, a_star))
            if all(x >= system.size for x in shifted):
                deps = [tuple(s - x for s, x in zip(shifted, a)) for a, _ in others]
                missing = [p for p in deps if p not in table]
                if missing:
                    stack.extend(missing)
                    continue
                pivot = q_star.evaluate([shifted[axis]])
                if not pivot:
                    raise CapabilityError(
                        f"polynomial leading coefficient vanishes at n={shifted} "
                        f"for coordinate {axis + 1}."
                    )
                total = sum(
                    (q.evaluate([shifted[axis]]) * table[p] for (_, q), p in zip(others, deps)),
                    Fraction(0),
                )
                table[n] = -total / pivot
                stack.pop()
                continue
            table[n] = self._from_section(system, n)
            stack.pop()
        return table[target]

    def _from_section(self, system: PRecursiveSystem, n: Exponent) -> Fraction:
        for j, x in enumerate(n):
            if x < system.size and (j, x) in system.sections:
                section = system.sections[j, x]
                return self.run(section, n[:j] + n[j + 1 :])
        raise InputError(f"missing initial value at {n}.")


def evaluate(system: PRecursiveSystem, n: Sequence[int], *, axis: int = 0) -> Fraction:
    """Computes f(n) from the recursions, the sections and the initial values.

    Points are resolved with the recursion of coordinate ``axis + 1``: its shift a*
    that is smallest in the lexicographic order starting with that coordinate is the
    pivot, so every other term refers to an earlier point. Points that cannot be reached
    this way come from the initial values or, when a coordinate is below k, from the
    section fixing it.

    Raises:
      CapabilityError: If the pivot coefficient vanishes at a needed point.
      InputError: If an initial value is missing.
    """
    n = tuple(n)
    if len(n) != system.dim:
        raise InputError(f"point {n} does not have {system.dim} coordinates.")
    if not 0 <= axis < system.dim:
        raise InputError(f"axis {axis} is out of range.")
    return _Session(axis).run(system, n)


def evaluate_along(system: PRecursiveSystem, n: Sequence[int], axis: int) -> Fraction:
    """Same as evaluate, stepping with the recursion of another coordinate."""
    return evaluate(system, n, axis=axis)


class Violation(NamedTuple):
    coordinate: int
    n: Exponent
    residual: Fraction


def check_solution(
    system: PRecursiveSystem, candidate: CoefficientSource, bound: int
) -> Optional[Violation]:
    """Returns the first recurrence instance with |n| <= bound that the candidate violates.

    Coordinates are reported 1-based.
    """
    if candidate.dim != system.dim:
        raise InputError(f"candidate has dimension {candidate.dim}, expected {system.dim}.")
    for n in points_upto(system.dim, bound):
        if any(x < system.size for x in n):
            continue
        for j, recursion in enumerate(system.recursions):
            residual = sum(
                (
                    q.evaluate([n[j]]) * candidate.coefficient(tuple(x - y for x, y in zip(n, a)))
                    for a, q in recursion
                ),
                Fraction(0),
            )
            if residual:
                return Violation(j + 1, n, residual)
    return None


def _to_sympy(q: Poly, y: sympy.Symbol) -> sympy.Expr:
    return sum(
        (sympy.Rational(c.numerator, c.denominator) * y**e for (e,), c in q.items()),
        sympy.Integer(0),
    )


def zero_free_from(q: Poly) -> int:
    """The least c >= 0 such that q has no integer root in [c, oo).

    Rational roots are found exactly over Q; only integer evaluation points matter.

    Raises:
      InputError: If q is the zero polynomial.
    """
    if not q:
        raise InputError("the zero polynomial vanishes everywhere.")
    if q.is_constant():
        return 0
    y = sympy.Symbol("y")
    roots = sympy.Poly(_to_sympy(q, y), y, domain="QQ").ground_roots()
    integers = [int(r) for r in roots if r.is_integer and r >= 0]
    return max(integers) + 1 if integers else 0


@dataclasses.dataclass(frozen=True)
class VanishingVerdict:
    confirmed: bool
    region: tuple[int, ...]
    witness: Optional[Exponent] = None
    value: Optional[Fraction] = None


@default_limits
def vanishing_propagate(
    system: PRecursiveSystem,
    f: CoefficientSource,
    c: int,
    strips: Sequence[int],
    *,
    bound: Optional[int] = None,
    limits: Optional[Limits] = None,
) -> VanishingVerdict:
    """Propagates vanishing of a solution from strips of width k to an orthant.

    If f vanishes on every strip N_{>=c}^{i-1} x [l_i, l_i + k - 1] x N_{>=c}^{d-i} then
    it vanishes on N_{>=l_1} x ... x N_{>=l_d}. The strips are checked up to the bound and
    the conclusion is cross-checked on the same range.

    Raises:
      InputError: If some coefficient polynomial has an integer root at or above c.
      VerificationError: If f is nonzero inside the asserted region.
    """
    bound = limits.bound if bound is None else bound
    if len(strips) != system.dim:
        raise InputError(f"expected {system.dim} strip positions, got {len(strips)}.")
    for recursion in system.recursions:
        for a, q in recursion:
            if zero_free_from(q) > c:
                raise InputError(
                    f"coefficient of shift {a} has an integer root at or above c={c}."
                )
    k = system.size
    for n in points_upto(system.dim, bound):
        for i, l in enumerate(strips):
            in_strip = l <= n[i] < l + k and all(
                x >= c for j, x in enumerate(n) if j != i
            )
            if in_strip and f.coefficient(n):
                return VanishingVerdict(False, tuple(strips), n, f.coefficient(n))
    for n in points_upto(system.dim, bound):
        if all(x >= l for x, l in zip(n, strips)) and f.coefficient(n):
            raise VerificationError(f"f does not vanish at {n} inside the asserted region.")
    logger.info("Vanishing confirmed on the orthant starting at %s", tuple(strips))
    return VanishingVerdict(True, tuple(strips))


@default_limits
def from_unit_product(
    r: UnitProductRational, *, bound: Optional[int] = None, limits: Optional[Limits] = None
) -> PRecursiveSystem:
    """Reads a shift system off the denominator of a unit-product fraction.

    With Q = prod (1 - c x^e)^mult = sum q_a x^a, Q F = P gives sum q_a f(n - a) = 0 once
    some coordinate of n exceeds the degree of P in it; k is chosen so that this holds on
    N_{>=k}^d. Initial values on the base region come from the oracle up to ``bound``.
    """
    bound = limits.bound if bound is None else bound
    denominator = r.denominator()
    degrees = [
        max(denominator.degree(i), r.numerator.degree(i) + 1) for i in range(r.dim)
    ]
    k = max(degrees + [1])
    recursion = tuple((a, Poly.constant(1, q)) for a, q in denominator.items())
    series = oracle.expand_rational(r, bound)
    initial = {n: series.coefficient(n) for n in series.points() if any(x < k for x in n)}
    return PRecursiveSystem(r.dim, k, (recursion,) * r.dim, initial=initial)
