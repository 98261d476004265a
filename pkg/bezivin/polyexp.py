"""Piecewise polynomial-exponential coefficient formulas on simple linear sets.

On a piece S = a + p_1 N + ... + p_s N the coefficient of x^n, n = a + sum(m_i p_i), is
sum_j B_j(m) * prod_i beta_ji^m_i with polynomials B_j in the local coordinates m.
"""

import dataclasses
import logging
import math
from collections.abc import Iterable, Sequence
from fractions import Fraction
from typing import Optional, Union

import sympy

from . import exactnum, oracle, semilin
from .errors import CapabilityError, InputError, VerificationError
from .leinartas import Block, DecompTerm, UnitProductRational, normalize_sum
from .polys import Exponent, Poly, affine, embed_univariate, product, rising_binomial
from .semilin import SimpleLinearSet
from .settings import Limits, default_limits

logger = logging.getLogger(__name__)

PARTITION = "partition"
ADDITIVE = "additive"

POLYA = "polya"
BEZIVIN = "bezivin"
NOT_BEZIVIN = "not_bezivin"
CONSTANTS_OUTSIDE_GROUP = "constants_outside_group"


def _power(beta: Sequence[Fraction], m: Sequence[int]) -> Fraction:
    value = Fraction(1)
    for b, k in zip(beta, m):
        if k:
            value *= b**k
    return value


@dataclasses.dataclass(frozen=True)
class ExpTerm:
    """B(m) * beta^m."""

    poly: Poly
    beta: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        beta = tuple(exactnum.to_fraction(b) for b in self.beta)
        if any(b == 0 for b in beta):
            raise InputError(f"bases {beta} must be nonzero.")
        if len(beta) != self.poly.dim:
            raise InputError(f"{len(beta)} bases for a polynomial in {self.poly.dim} variables.")
        object.__setattr__(self, "beta", beta)

    def evaluate(self, m: Sequence[int]) -> Fraction:
        return self.poly.evaluate(m) * _power(self.beta, m)


@dataclasses.dataclass(frozen=True)
class ExponentialPolynomial:
    """A finite sum of ExpTerms in ``arity`` local coordinates, kept canonical."""

    arity: int
    terms: tuple[ExpTerm, ...] = ()

    def __post_init__(self) -> None:
        merged: dict[tuple[Fraction, ...], Poly] = {}
        for term in self.terms:
            if term.poly.dim != self.arity:
                raise InputError(f"term of arity {term.poly.dim} in a formula of arity {self.arity}.")
            merged[term.beta] = merged.get(term.beta, Poly.zero(self.arity)) + term.poly
        terms = tuple(ExpTerm(p, b) for b, p in sorted(merged.items()) if p)
        object.__setattr__(self, "terms", terms)

    @classmethod
    def constant(cls, arity: int, value: Fraction) -> "ExponentialPolynomial":
        return cls(arity, (ExpTerm(Poly.constant(arity, value), (Fraction(1),) * arity),))

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, m: Sequence[int]) -> Fraction:
        return sum((t.evaluate(m) for t in self.terms), Fraction(0))

    def degree(self) -> int:
        return max((t.poly.total_degree() for t in self.terms), default=0)

    def __add__(self, other: "ExponentialPolynomial") -> "ExponentialPolynomial":
        if other.arity != self.arity:
            raise InputError("cannot add formulas of different arity.")
        return ExponentialPolynomial(self.arity, self.terms + other.terms)

    def transport(self, mu: Sequence[int], t: Sequence[Sequence[int]]) -> "ExponentialPolynomial":
        """Rewrites the formula in the local coordinates of a subset.

        The subset's points have coordinates m = mu + sum(m'_i t[i]) here, so the new
        formula in m' has bases prod_j beta_j^t[i][j] and picks up the factor beta^mu.
        """
        r = len(t)
        images = [affine(r, mu[j], [row[j] for row in t]) for j in range(self.arity)]
        terms = []
        for term in self.terms:
            poly = term.poly.substitute(images) if self.arity else term.poly.with_dim(r)
            beta = tuple(_power(term.beta, row) for row in t)
            terms.append(ExpTerm(poly * _power(term.beta, mu), beta))
        return ExponentialPolynomial(r, tuple(terms))


@dataclasses.dataclass(frozen=True)
class PolyExpPiece:
    set: SimpleLinearSet
    formula: ExponentialPolynomial

    def __post_init__(self) -> None:
        if self.formula.arity != self.set.rank:
            raise InputError(
                f"formula of arity {self.formula.arity} on a set with {self.set.rank} periods."
            )

    def value_at(self, n: Sequence[int]) -> Optional[Fraction]:
        """The formula's value at n, or None when n is outside the piece."""
        m = semilin.member_coords(n, self.set)
        return None if m is None else self.formula.evaluate(m)

    def restrict(self, sub: SimpleLinearSet) -> "PolyExpPiece":
        """The same coefficients viewed on a subset of the piece."""
        cert = semilin.contains_simple(sub, self.set)
        if cert is None:
            raise InputError(f"{sub} is not contained in {self.set}.")
        return PolyExpPiece(sub, self.formula.transport(cert.mu, cert.t))


@dataclasses.dataclass(frozen=True)
class PiecewisePolyExp:
    """Pieces with either partition or additive semantics.

    ``note`` records why a requested partition could not be built.
    """

    dim: int
    pieces: tuple[PolyExpPiece, ...] = ()
    semantics: str = ADDITIVE
    note: Optional[str] = None

    def coefficient(self, n: Sequence[int]) -> Fraction:
        return evaluate_at(self, n)


def term_to_pieces(term: DecompTerm) -> PiecewisePolyExp:
    """Expands an independent decomposition term into one piece per numerator monomial.

    1/prod (1 - c_i x^e_i)^k_i has coefficient prod binom(m_i + k_i - 1, k_i - 1) c_i^m_i
    at sum(m_i e_i).

    Raises:
      InputError: If the term's blocks are not verified independent.
    """
    if not term.independent_verified:
        raise InputError("only verified independent terms expand into pieces.")
    blocks = term.blocks
    order = semilin.permutation_to_canonical([b.e for b in blocks])
    blocks = [blocks[i] for i in order]
    s = len(blocks)
    base = product(
        (embed_univariate(rising_binomial(b.mult), s, i) for i, b in enumerate(blocks)), s
    )
    beta = tuple(b.c for b in blocks)
    periods = tuple(b.e for b in blocks)
    pieces = tuple(
        PolyExpPiece(
            SimpleLinearSet(a, periods),
            ExponentialPolynomial(s, (ExpTerm(base * coeff, beta),)),
        )
        for a, coeff in term.numerator.items()
    )
    return PiecewisePolyExp(term.dim, pieces, ADDITIVE)


def evaluate_at(p: PiecewisePolyExp, n: Sequence[int]) -> Fraction:
    """Exact coefficient at n under the piecewise semantics."""
    total = Fraction(0)
    for piece in p.pieces:
        value = piece.value_at(n)
        if value is None:
            continue
        if p.semantics == PARTITION:
            return value
        total += value
    return total


def canonicalize(p: PiecewisePolyExp) -> PiecewisePolyExp:
    """Merges pieces on identical sets, drops zero formulas and sorts the pieces."""
    merged: dict[SimpleLinearSet, ExponentialPolynomial] = {}
    for piece in p.pieces:
        if piece.set in merged:
            merged[piece.set] = merged[piece.set] + piece.formula
        else:
            merged[piece.set] = piece.formula
    pieces = tuple(
        PolyExpPiece(s, f)
        for s, f in sorted(merged.items(), key=lambda item: item[0].sort_key())
        if not f.is_zero()
    )
    return dataclasses.replace(p, pieces=pieces)


def merge_all(parts: Iterable[PiecewisePolyExp], dim: int) -> PiecewisePolyExp:
    """Concatenates additive piles and canonicalizes."""
    pieces = tuple(piece for part in parts for piece in part.pieces)
    return canonicalize(PiecewisePolyExp(dim, pieces, ADDITIVE))


def _split_piece(
    piece: PolyExpPiece, sub: SimpleLinearSet
) -> Optional[list[PolyExpPiece]]:
    rest = semilin.split_off(piece.set, sub)
    if rest is None:
        return None
    return [piece.restrict(s) for s in [sub] + rest]


def _overlapping_pair(
    pieces: Sequence[PolyExpPiece], limits: Limits
) -> Optional[tuple[int, int]]:
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            if not semilin.is_disjoint(pieces[i].set, pieces[j].set, limits=limits):
                return i, j
    return None


def _torsion_indices(formula: ExponentialPolynomial) -> Optional[list[int]]:
    for a in range(len(formula.terms)):
        for b in range(a + 1, len(formula.terms)):
            orders = [
                exactnum.torsion_quotient(x, y)
                for x, y in zip(formula.terms[a].beta, formula.terms[b].beta)
            ]
            if None in orders or all(o == 1 for o in orders):
                continue
            return orders
    return None


def refine_torsion(piece: PolyExpPiece) -> Optional[list[PolyExpPiece]]:
    """Splits a piece along cosets when two bases differ by a root of unity.

    Bases beta and beta' with beta_i = -beta'_i on some coordinates become equal on the
    cosets of index 2 along those coordinates. Returns None when there is nothing to do.
    """
    orders = _torsion_indices(piece.formula)
    if orders is None:
        return None
    cosets = semilin.coset_refine(piece.set, orders)
    return [p for p in (piece.restrict(s) for s in cosets) if not p.formula.is_zero()]


@default_limits
def to_partition(p: PiecewisePolyExp, *, limits: Optional[Limits] = None) -> PiecewisePolyExp:
    """Upgrades an additive pile to partition semantics where the pipeline can.

    Overlapping pieces are split by containment or through a component of their
    intersection; then pieces whose bases differ by roots of unity are coset refined.
    Shapes that cannot be split exactly leave the result additive with a note.
    """
    current = list(canonicalize(p).pieces)
    for rounds in range(limits.refine_budget + 1):
        pair = _overlapping_pair(current, limits)
        if pair is None:
            break
        if rounds == limits.refine_budget:
            return _additive(p, current, "refinement budget exhausted")
        i, j = pair
        first, second = current[i], current[j]
        if semilin.contains_simple(second.set, first.set) is not None:
            replaced = _split_piece(first, second.set)
            kept = [second]
        elif semilin.contains_simple(first.set, second.set) is not None:
            replaced = _split_piece(second, first.set)
            kept = [first]
        else:
            common = semilin.intersect_simple(first.set, second.set, limits=limits)
            pieces_i = _split_piece(first, common.components[0])
            pieces_j = _split_piece(second, common.components[0])
            replaced = None if pieces_i is None or pieces_j is None else pieces_i + pieces_j
            kept = []
        if replaced is None:
            return _additive(p, current, f"cannot split {first.set} against {second.set}")
        rest = [c for k, c in enumerate(current) if k not in pair]
        current = list(
            canonicalize(PiecewisePolyExp(p.dim, tuple(rest + kept + replaced))).pieces
        )
        logger.debug("Partition refinement round %d: %d pieces", rounds + 1, len(current))
    for _ in range(limits.refine_budget):
        refined, changed = [], False
        for piece in current:
            split = refine_torsion(piece)
            changed = changed or split is not None
            refined.extend([piece] if split is None else split)
        current = list(canonicalize(PiecewisePolyExp(p.dim, tuple(refined))).pieces)
        if not changed:
            break
    if any(_torsion_indices(piece.formula) is not None for piece in current):
        return _additive(p, current, "torsion refinement budget exhausted")
    logger.info("Built a partition with %d pieces", len(current))
    return PiecewisePolyExp(p.dim, tuple(current), PARTITION)


def _additive(p: PiecewisePolyExp, pieces: list[PolyExpPiece], note: str) -> PiecewisePolyExp:
    logger.warning("Partition upgrade failed: %s", note)
    return PiecewisePolyExp(p.dim, tuple(pieces), ADDITIVE, note)


@dataclasses.dataclass(frozen=True)
class StructureVerdict:
    kind: str
    l_max: Optional[int] = None
    witness_piece: Optional[PolyExpPiece] = None
    witness_term: Optional[ExpTerm] = None
    witness_value: Optional[Fraction] = None
    within_r: Optional[bool] = None


def classify_structure(
    p: PiecewisePolyExp, group: exactnum.GroupSpec, r: Optional[int] = None
) -> StructureVerdict:
    """Classifies a partition as Polya, Bezivin with l_max terms, or neither.

    Raises:
      CapabilityError: If ``p`` does not have partition semantics.
    """
    if p.semantics != PARTITION:
        raise CapabilityError(
            "structure classification needs a partition" + (f": {p.note}" if p.note else ".")
        )
    for piece in p.pieces:
        for term in piece.formula.terms:
            if not term.poly.is_constant():
                return StructureVerdict(NOT_BEZIVIN, witness_piece=piece, witness_term=term)
    for piece in p.pieces:
        for term in piece.formula.terms:
            for value in (term.poly.constant_term(),) + term.beta:
                if exactnum.group_member(value, group) is None:
                    return StructureVerdict(
                        CONSTANTS_OUTSIDE_GROUP,
                        witness_piece=piece,
                        witness_term=term,
                        witness_value=value,
                    )
    l_max = max((len(piece.formula.terms) for piece in p.pieces), default=0)
    within = None if r is None else l_max <= r
    kind = POLYA if l_max <= 1 else BEZIVIN
    return StructureVerdict(kind, l_max=l_max, within_r=within)


def is_polynomial(p: PiecewisePolyExp) -> bool:
    """Every base is 1, so each piece carries a polynomial."""
    return all(b == 1 for piece in p.pieces for t in piece.formula.terms for b in t.beta)


def is_exponential(p: PiecewisePolyExp) -> bool:
    """Every polynomial coefficient is constant."""
    return all(t.poly.is_constant() for piece in p.pieces for t in piece.formula.terms)


@dataclasses.dataclass(frozen=True)
class GlobalForm:
    """sum A(n) alpha^n, valid on the piece it was lifted from."""

    dim: int
    terms: tuple[tuple[Poly, tuple[Fraction, ...]], ...]

    def evaluate(self, n: Sequence[int]) -> Fraction:
        return sum((a.evaluate(n) * _power(alpha, n) for a, alpha in self.terms), Fraction(0))


@dataclasses.dataclass(frozen=True)
class LiftFailure:
    reason: str


def _left_inverse(periods: Sequence[Exponent], dim: int) -> list[list[Fraction]]:
    """Rows l_i (length dim) with <l_i, p_j> = [i == j], supported on pivot coordinates."""
    s = len(periods)
    if not s:
        return []
    matrix = sympy.Matrix(dim, s, lambda r, c: periods[c][r])
    _, pivots = matrix.T.rref()
    square = matrix.extract(list(pivots), list(range(s)))
    inverse = square.inv()
    rows = []
    for i in range(s):
        row = [Fraction(0)] * dim
        for k, coord in enumerate(pivots):
            value = sympy.Rational(inverse[i, k])
            row[coord] = Fraction(int(value.p), int(value.q))
        rows.append(row)
    return rows


@default_limits
def lift_global(
    piece: PolyExpPiece, *, limits: Optional[Limits] = None
) -> Union[GlobalForm, LiftFailure]:
    """Rewrites a piece's formula in the global exponent n when the roots are rational.

    With local coordinates m = L (n - a) for a rational left inverse L, beta^m becomes
    prod_j alpha_j^(n_j - a_j) with alpha_j = prod_i beta_i^L_ij, which needs rational
    roots of the bases.

    Returns:
      A GlobalForm, or a LiftFailure whose reason names the irrational root. The 2N
      piece of 1/(1 - 2x^2) fails since 2^(1/2) is irrational.
    """
    s, dim = piece.set.rank, piece.set.dim
    left = _left_inverse(piece.set.periods, dim)
    offset = piece.set.offset
    images = [
        affine(dim, -sum(l * a for l, a in zip(row, offset)), row) for row in left
    ]
    terms = []
    for term in piece.formula.terms:
        alpha = []
        for j in range(dim):
            value = Fraction(1)
            for i in range(s):
                factor = exactnum.rational_power(term.beta[i], left[i][j])
                if factor is None:
                    return LiftFailure(
                        f"irrational root: {exactnum.format_rational(term.beta[i])}"
                        f"^({exactnum.format_rational(left[i][j])}) is not rational"
                    )
                value *= factor
            alpha.append(value)
        shift = _power([1 / x for x in alpha], offset)
        poly = term.poly.substitute(images) if s else Poly.constant(dim, term.poly.constant_term())
        terms.append((poly * shift, tuple(alpha)))
    form = GlobalForm(dim, tuple(terms))
    if limits.exact_verify:
        for n in semilin.enumerate_upto(piece.set, limits.verify_bound):
            if form.evaluate(n) != piece.value_at(n):
                raise VerificationError(f"global form of {piece.set} disagrees at {n}.")
    return form


def _binomial_basis(poly: Poly) -> list[tuple[Exponent, Fraction]]:
    """Writes a polynomial as sum lambda_k prod_i binom(m_i + k_i - 1, k_i - 1), k >= 1."""
    s = poly.dim
    result = []
    while poly:
        delta, coeff = poly.leading()
        weight = coeff * math.prod(math.factorial(x) for x in delta)
        k = tuple(x + 1 for x in delta)
        result.append((k, weight))
        basis = product((embed_univariate(rising_binomial(x), s, i) for i, x in enumerate(k)), s)
        poly = poly - basis * weight
    return result


def piece_to_terms(piece: PolyExpPiece) -> list[DecompTerm]:
    """Independent fractions whose expansions add up to the piece."""
    dim = piece.set.dim
    terms = []
    for term in piece.formula.terms:
        for k, weight in _binomial_basis(term.poly):
            blocks = tuple(Block(e, c, mult) for e, c, mult in zip(piece.set.periods, term.beta, k))
            numerator = Poly.monomial(piece.set.offset, weight)
            terms.append(DecompTerm(dim, numerator, blocks, independent_verified=True))
    return terms


@default_limits
def piece_to_rational(
    piece: PolyExpPiece, *, limits: Optional[Limits] = None
) -> UnitProductRational:
    """The single unit-product fraction whose coefficients are the piece's values.

    Raises:
      VerificationError: If the oracle expansion disagrees with the piece.
    """
    terms = piece_to_terms(piece)
    if not terms:
        return UnitProductRational.polynomial(Poly.zero(piece.set.dim))
    result = normalize_sum(terms, limits=limits)
    if limits.exact_verify:
        expected = oracle.from_source(
            PiecewisePolyExp(piece.set.dim, (piece,), PARTITION), limits.verify_bound
        )
        mismatch = oracle.compare(oracle.expand_rational(result, limits.verify_bound), expected)
        if mismatch is not None:
            raise VerificationError(f"piece and fraction differ at {mismatch.n}.")
    return result
