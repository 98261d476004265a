"""Skew-geometric series c0 x^u0 / prod (1 - c_i x^e_i) and their finite sums."""

import dataclasses
import logging
from collections.abc import Sequence
from fractions import Fraction
from typing import NamedTuple, Optional

from . import exactnum, intlat, oracle, semilin
from .errors import CapabilityError, InputError, VerificationError
from .leinartas import Block, UnitProductRational
from .polyexp import PiecewisePolyExp
from .polys import Exponent, Poly
from .semilin import SimpleLinearSet
from .settings import Limits, default_limits

logger = logging.getLogger(__name__)

UNAMBIGUOUS = "unambiguous"
TRIVIALLY_AMBIGUOUS = "trivially_ambiguous"
AMBIGUOUS = "ambiguous"
UNKNOWN = "unknown"

POLYA = "polya"
BEZIVIN = "bezivin"
FAIL = "fail"


class Factor(NamedTuple):
    c: Fraction
    e: Exponent


@dataclasses.dataclass(frozen=True)
class SkewGeometric:
    """c0 x^u0 / prod (1 - c_i x^e_i) with linearly independent e_i.

    Factors are stored in the order of the support's periods.
    """

    c0: Fraction
    u0: Exponent
    factors: tuple[Factor, ...] = ()

    def __post_init__(self) -> None:
        factors = tuple(
            sorted(
                (Factor(exactnum.to_fraction(c), tuple(e)) for c, e in self.factors),
                key=lambda f: f.e,
                reverse=True,
            )
        )
        if any(not f.c for f in factors):
            raise InputError("factor constants must be nonzero.")
        if not intlat.independent([f.e for f in factors]):
            raise InputError(f"factor exponents {[f.e for f in factors]} are dependent.")
        object.__setattr__(self, "c0", exactnum.to_fraction(self.c0))
        object.__setattr__(self, "u0", tuple(self.u0))
        object.__setattr__(self, "factors", factors)
        self.support  # validates u0 and the exponents

    @property
    def dim(self) -> int:
        return len(self.u0)

    @property
    def support(self) -> SimpleLinearSet:
        return SimpleLinearSet(self.u0, tuple(f.e for f in self.factors))

    def sort_key(self) -> tuple:
        return (self.support.sort_key(), tuple(f.c for f in self.factors), self.c0)

    def coefficient(self, n: Sequence[int]) -> Fraction:
        return coefficient_at(self, n)

    def to_rational(self) -> UnitProductRational:
        numerator = Poly.monomial(self.u0, self.c0)
        return UnitProductRational(self.dim, numerator, tuple(Block(f.e, f.c) for f in self.factors))


@dataclasses.dataclass(frozen=True)
class SkewGeomSum:
    dim: int
    summands: tuple[SkewGeometric, ...] = ()
    status: str = UNKNOWN

    def __post_init__(self) -> None:
        if any(s.dim != self.dim for s in self.summands):
            raise InputError(f"every summand must have dimension {self.dim}.")
        object.__setattr__(
            self, "summands", tuple(sorted(self.summands, key=SkewGeometric.sort_key))
        )

    def coefficient(self, n: Sequence[int]) -> Fraction:
        return sum((coefficient_at(s, n) for s in self.summands), Fraction(0))


def indicator_of(s: SimpleLinearSet) -> SkewGeometric:
    """The series with coefficient 1 exactly on s."""
    return SkewGeometric(Fraction(1), s.offset, tuple(Factor(Fraction(1), p) for p in s.periods))


def coefficient_at(f: SkewGeometric, n: Sequence[int]) -> Fraction:
    """c0 prod c_i^m_i where m are the support coordinates of n, and 0 off the support."""
    if not f.c0:
        return Fraction(0)
    m = semilin.member_coords(n, f.support)
    if m is None:
        return Fraction(0)
    value = f.c0
    for factor, k in zip(f.factors, m):
        value *= factor.c**k
    return value


def restrict_to(f: SkewGeometric, s: SimpleLinearSet) -> SkewGeometric:
    """The Hadamard product of f with the indicator of s, for s inside the support.

    With the containment certificate (mu, T) the result is c0 prod c_j^mu_j x^offset over
    factors (prod_j c_j^T_ij, s.period_i).

    Raises:
      InputError: If s is not contained in the support of f.
    """
    cert = semilin.contains_simple(s, f.support)
    if cert is None:
        raise InputError(f"{s} is not contained in the support {f.support}.")
    c0 = f.c0
    for factor, mu in zip(f.factors, cert.mu):
        c0 *= factor.c**mu
    factors = []
    for period, row in zip(s.periods, cert.t):
        c = Fraction(1)
        for factor, t in zip(f.factors, row):
            c *= factor.c**t
        factors.append(Factor(c, period))
    return SkewGeometric(c0, s.offset, tuple(factors))


def to_rational(f: SkewGeomSum) -> list[UnitProductRational]:
    return [s.to_rational() for s in f.summands]


@dataclasses.dataclass(frozen=True)
class AmbiguityReport:
    status: str
    r: int
    witness: tuple[int, ...] = ()


def _supports(f: SkewGeomSum) -> list[tuple[int, SimpleLinearSet]]:
    return [(i, s.support) for i, s in enumerate(f.summands) if s.c0]


@default_limits
def classify_ambiguity(f: SkewGeomSum, *, limits: Optional[Limits] = None) -> AmbiguityReport:
    """Compares the supports of nonzero summands pairwise and measures their overlap.

    Returns:
      The status and r, the largest number of supports sharing a point, with the indices
      of one such group of summands.
    """
    supports = _supports(f)
    status = UNAMBIGUOUS
    for a in range(len(supports)):
        for b in range(a + 1, len(supports)):
            s1, s2 = supports[a][1], supports[b][1]
            if semilin.is_disjoint(s1, s2, limits=limits):
                continue
            if semilin.equal_sets(s1, s2):
                status = TRIVIALLY_AMBIGUOUS if status == UNAMBIGUOUS else status
            else:
                status = AMBIGUOUS
    r, witness = semilin.max_overlap([s for _, s in supports], limits=limits)
    return AmbiguityReport(status, r, tuple(supports[i][0] for i in witness))


def _merge_equal(summands: Sequence[SkewGeometric]) -> list[SkewGeometric]:
    merged: dict[tuple, SkewGeometric] = {}
    for s in summands:
        key = (s.u0, s.factors)
        if key in merged:
            s = dataclasses.replace(s, c0=merged[key].c0 + s.c0)
        merged[key] = s
    return list(merged.values())


def _torsion_pair(summands: Sequence[SkewGeometric]) -> Optional[tuple[int, int, list[int]]]:
    for a in range(len(summands)):
        for b in range(a + 1, len(summands)):
            s1, s2 = summands[a], summands[b]
            if not (s1.c0 and s2.c0) or s1.support != s2.support:
                continue
            orders = [
                exactnum.torsion_quotient(f1.c, f2.c) for f1, f2 in zip(s1.factors, s2.factors)
            ]
            if 2 in orders:
                return a, b, [2 if o == 2 else 1 for o in orders]
    return None


@default_limits
def torsion_normalize(f: SkewGeomSum, *, limits: Optional[Limits] = None) -> SkewGeomSum:
    """Makes the coefficient vectors on shared supports relatively non-torsion.

    Two summands on one support whose constants on some period differ by a sign are both
    restricted to the cosets of index 2 along those periods, where the constants agree
    and the summands merge.

    Raises:
      CapabilityError: If the refinements exceed refine_budget rounds.
    """
    summands = _merge_equal(f.summands)
    for rounds in range(limits.refine_budget + 1):
        pair = _torsion_pair(summands)
        if pair is None:
            break
        if rounds == limits.refine_budget:
            raise CapabilityError(
                f"torsion normalization exceeded {limits.refine_budget} refinement rounds."
            )
        a, b, indices = pair
        cosets = semilin.coset_refine(summands[a].support, indices)
        refined = [restrict_to(summands[k], c) for k in (a, b) for c in cosets]
        rest = [s for k, s in enumerate(summands) if k not in (a, b)]
        summands = _merge_equal(rest + refined)
        logger.debug("Torsion refinement along indices %s: %d summands", indices, len(summands))
    result = SkewGeomSum(f.dim, tuple(summands))
    if limits.exact_verify:
        bound = limits.verify_bound
        mismatch = oracle.compare(
            oracle.from_source(result, bound), oracle.from_source(f, bound)
        )
        if mismatch is not None:
            raise VerificationError(f"torsion normalization changed the series at {mismatch.n}.")
    status = classify_ambiguity(result, limits=limits).status
    return dataclasses.replace(result, status=status)


@dataclasses.dataclass(frozen=True)
class GroupVerdict:
    kind: str
    r_eff: int
    witness: Optional[Fraction] = None
    witness_summand: Optional[int] = None
    within_r: Optional[bool] = None


@default_limits
def certify_group(
    f: SkewGeomSum,
    group: exactnum.GroupSpec,
    r: Optional[int] = None,
    *,
    limits: Optional[Limits] = None,
) -> GroupVerdict:
    """Checks every constant against the group and classifies the sum.

    Returns:
      fail with the first constant outside the group; otherwise polya for unambiguous
      sums and bezivin(r_eff) where r_eff is the maximal overlap of supports.
    """
    report = classify_ambiguity(f, limits=limits)
    within = None if r is None else report.r <= r
    for index, s in enumerate(f.summands):
        if not s.c0:
            continue
        for value in (s.c0,) + tuple(x.c for x in s.factors):
            if exactnum.group_member(value, group) is None:
                return GroupVerdict(FAIL, report.r, value, index, within)
    kind = POLYA if report.status == UNAMBIGUOUS else BEZIVIN
    return GroupVerdict(kind, report.r, within_r=within)


@default_limits
def subinverse_unambiguous(f: SkewGeomSum, *, limits: Optional[Limits] = None) -> SkewGeomSum:
    """Coefficientwise reciprocal of an unambiguous sum, summand by summand.

    Raises:
      InputError: If the supports of the summands are not pairwise disjoint.
    """
    status = classify_ambiguity(f, limits=limits).status
    if status != UNAMBIGUOUS:
        raise InputError(f"the sub-inverse needs an unambiguous sum, this one is {status}.")
    summands = tuple(
        s
        if not s.c0
        else SkewGeometric(1 / s.c0, s.u0, tuple(Factor(1 / x.c, x.e) for x in s.factors))
        for s in f.summands
    )
    return SkewGeomSum(f.dim, summands, UNAMBIGUOUS)


def is_geometric(f: SkewGeometric) -> bool:
    """Every factor is a single variable, as in 1/((1 - 2x)(1 - 3y))."""
    unit = [0] * (f.dim - 1) + [1]
    return all(sorted(x.e) == unit for x in f.factors)


def from_pieces(p: PiecewisePolyExp) -> SkewGeomSum:
    """Turns pieces with constant polynomial coefficients into skew-geometric summands.

    Raises:
      InputError: If some piece has a non-constant polynomial coefficient.
    """
    summands = []
    for piece in p.pieces:
        for term in piece.formula.terms:
            if not term.poly.is_constant():
                raise InputError(f"piece on {piece.set} is not exponential.")
            factors = tuple(Factor(b, e) for b, e in zip(term.beta, piece.set.periods))
            summands.append(SkewGeometric(term.poly.constant_term(), piece.set.offset, factors))
    return SkewGeomSum(p.dim, tuple(summands))
