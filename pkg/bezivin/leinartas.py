"""Unit-product rational functions and their Leinartas decomposition.

A unit-product rational function is P / prod (1 - c_i x^e_i)^k_i. The decomposition
rewrites it as a sum of such fractions whose blocks have linearly independent exponent
vectors, so that every summand expands into a polynomial-exponential formula on a simple
linear set.
"""

import dataclasses
import logging
import math
from collections.abc import Iterable, Sequence
from fractions import Fraction
from typing import NamedTuple, Optional

import sympy

from . import exactnum, intlat, oracle
from .errors import CapabilityError, InputError, VerificationError
from .polys import Exponent, Poly
from .settings import Limits, default_limits

logger = logging.getLogger(__name__)

INDEPENDENT = "independent"
NO_COMMON_ROOT = "no_common_root"
DEPENDENT_COMMON_ROOT = "dependent_common_root"


@dataclasses.dataclass(frozen=True, order=True)
class Block:
    """The denominator factor (1 - c x^e)^mult; blocks order by e, then c."""

    e: Exponent
    c: Fraction
    mult: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "e", tuple(int(x) for x in self.e))
        object.__setattr__(self, "c", exactnum.to_fraction(self.c))
        if not self.c:
            raise InputError(f"block with exponent {self.e} has a zero constant.")
        if any(x < 0 for x in self.e) or not any(self.e):
            raise InputError(f"block exponent {self.e} must be a nonzero vector in N^d.")
        if self.mult < 1:
            raise InputError(f"block multiplicity must be positive, got {self.mult}.")

    @property
    def key(self) -> tuple[Exponent, Fraction]:
        return self.e, self.c

    def with_mult(self, mult: int) -> "Block":
        return dataclasses.replace(self, mult=mult)

    def factor(self) -> Poly:
        """Returns 1 - c x^e (without the multiplicity)."""
        return 1 - Poly.monomial(self.e, self.c)


def _merge_blocks(blocks: Iterable[Block]) -> tuple[Block, ...]:
    mults: dict[tuple[Exponent, Fraction], int] = {}
    for block in blocks:
        mults[block.key] = mults.get(block.key, 0) + block.mult
    return tuple(sorted(Block(e, c, k) for (e, c), k in mults.items()))


@dataclasses.dataclass(frozen=True)
class UnitProductRational:
    """numerator / prod (1 - c x^e)^mult over the canonically ordered blocks."""

    dim: int
    numerator: Poly
    blocks: tuple[Block, ...] = ()

    def __post_init__(self) -> None:
        if self.numerator.dim != self.dim:
            raise InputError(f"numerator has {self.numerator.dim} variables, expected {self.dim}.")
        for block in self.blocks:
            if len(block.e) != self.dim:
                raise InputError(f"block exponent {block.e} does not have {self.dim} coordinates.")
        object.__setattr__(self, "blocks", _merge_blocks(self.blocks))

    @classmethod
    def polynomial(cls, poly: Poly) -> "UnitProductRational":
        return cls(poly.dim, poly)

    def is_zero(self) -> bool:
        return not self.numerator

    def denominator(self) -> Poly:
        result = Poly.one(self.dim)
        for block in self.blocks:
            result = result * block.factor() ** block.mult
        return result

    def scale(self, factor: Fraction) -> "UnitProductRational":
        return dataclasses.replace(self, numerator=self.numerator * Fraction(factor))

    def __neg__(self) -> "UnitProductRational":
        return self.scale(-1)


@dataclasses.dataclass(frozen=True)
class DecompTerm(UnitProductRational):
    independent_verified: bool = False


def _common_denominator(
    terms: Sequence[UnitProductRational], dim: int
) -> tuple[tuple[Block, ...], Poly]:
    mults: dict[tuple[Exponent, Fraction], int] = {}
    for term in terms:
        for block in term.blocks:
            mults[block.key] = max(mults.get(block.key, 0), block.mult)
    blocks = tuple(sorted(Block(e, c, k) for (e, c), k in mults.items()))
    numerator = Poly.zero(dim)
    for term in terms:
        own = {b.key: b.mult for b in term.blocks}
        product = term.numerator
        for block in blocks:
            missing = block.mult - own.get(block.key, 0)
            if missing:
                product = product * block.factor() ** missing
        numerator = numerator + product
    return blocks, numerator


def rational_identity(
    lhs: Sequence[UnitProductRational], rhs: Sequence[UnitProductRational]
) -> bool:
    """Tells whether two sums are the same rational function, by clearing denominators."""
    terms = list(lhs) + [-t for t in rhs]
    if not terms:
        return True
    _, numerator = _common_denominator(terms, terms[0].dim)
    return not numerator


@default_limits
def normalize_sum(
    terms: Sequence[UnitProductRational], *, limits: Optional[Limits] = None
) -> UnitProductRational:
    """Brings a sum of fractions over the least common unit-product denominator.

    Raises:
      InputError: If the sum is empty or the dimensions differ.
      VerificationError: If the oracle disagrees with the combined fraction.
    """
    if not terms:
        raise InputError("cannot normalize an empty sum.")
    dim = terms[0].dim
    if any(t.dim != dim for t in terms):
        raise InputError("all summands must have the same dimension.")
    if len(terms) == 1:
        return terms[0]
    blocks, numerator = _common_denominator(terms, dim)
    result = UnitProductRational(dim, numerator, blocks if numerator else ())
    if limits.exact_verify:
        bound = limits.verify_bound
        mismatch = oracle.compare(
            oracle.expand_rational(result, bound), oracle.expand_rational(terms, bound)
        )
        if mismatch is not None:
            raise VerificationError(f"normalized sum differs from its summands at {mismatch.n}.")
    logger.debug("Normalized %d summands over %d blocks", len(terms), len(result.blocks))
    return result


class GcdSplit(NamedTuple):
    blocks: list[Block]
    note: Optional[str] = None


def gcd_normalize(block: Block) -> GcdSplit:
    """Splits 1 - c x^e along t = gcd(e) into rational binomial factors when possible.

    Only differences of squares are split: t even and c a positive rational square gives
    (1 - r x^(e/2))(1 + r x^(e/2)), and each half is split again. Everything else stays
    as it is; a note is attached when t > 1.

    Examples:
      1 - 4x^2y^2 gives (1 - 2xy)(1 + 2xy); 1 - 2x^2 stays with note "irrational roots".
    """
    t = math.gcd(*block.e)
    if t == 1:
        return GcdSplit([block])
    root = exactnum.rational_root(block.c, 2) if t % 2 == 0 and block.c > 0 else None
    if root is None:
        return GcdSplit([block], "irrational roots")
    half = tuple(x // 2 for x in block.e)
    blocks, notes = [], []
    for c in (root, -root):
        split = gcd_normalize(Block(half, c, block.mult))
        blocks.extend(split.blocks)
        if split.note:
            notes.append(split.note)
    return GcdSplit(sorted(blocks), notes[0] if notes else None)


def gcd_normalize_rational(r: UnitProductRational) -> tuple[UnitProductRational, list[str]]:
    """Applies gcd_normalize to every block of a fraction; returns the notes as well."""
    blocks, notes = [], []
    for block in r.blocks:
        split = gcd_normalize(block)
        blocks.extend(split.blocks)
        if split.note:
            notes.append(f"1 - {exactnum.format_rational(block.c)} x^{block.e}: {split.note}")
    return UnitProductRational(r.dim, r.numerator, tuple(blocks)), notes


@dataclasses.dataclass(frozen=True)
class KernelVerdict:
    kind: str
    kernel_vector: Optional[tuple[int, ...]] = None
    character: Optional[Fraction] = None


def _character(blocks: Sequence[Block], k: Sequence[int]) -> Fraction:
    value = Fraction(1)
    for block, ki in zip(blocks, k):
        if ki:
            value *= block.c**ki
    return value


def kernel_character_test(blocks: Sequence[Block]) -> KernelVerdict:
    """Decides independence and common roots of the blocks.

    The blocks share a root in the algebraic torus iff the character k -> prod c_i^k_i is
    trivial on the integer kernel of the exponent matrix; a basis of the kernel suffices.

    Examples:
      1 - x, 1 - y, 1 - xy gives dependent_common_root with k = (1, 1, -1);
      1 - 2x, 1 - 3x gives no_common_root with k = (1, -1) and character 2/3.
    """
    if not blocks:
        raise InputError("the kernel character test needs at least one block.")
    dim = len(blocks[0].e)
    basis = intlat.kernel(intlat.IntMatrix.from_columns([b.e for b in blocks], rows=dim))
    if not basis:
        return KernelVerdict(INDEPENDENT)
    for k in basis:
        value = _character(blocks, k)
        if value != 1:
            return KernelVerdict(NO_COMMON_ROOT, tuple(k), value)
    return KernelVerdict(DEPENDENT_COMMON_ROOT, tuple(basis[0]), Fraction(1))


Piece = tuple[tuple[Block, ...], Poly]


def _reduced(blocks: Sequence[Block], changes: dict[int, int]) -> tuple[Block, ...]:
    """Returns the blocks with the multiplicities in ``changes`` (0 drops the block)."""
    result = []
    for i, block in enumerate(blocks):
        mult = changes.get(i, block.mult)
        if mult:
            result.append(block.with_mult(mult))
    return tuple(result)


def _split_no_common_root(blocks: tuple[Block, ...], verdict: KernelVerdict) -> list[Piece]:
    """Applies 1 = ((1 - A) - lambda (1 - B)) / (1 - lambda) with telescoped products.

    A and B are the products of u_i = c_i x^e_i over the positive and negative parts of
    the kernel vector, so A = lambda B.
    """
    dim = len(blocks[0].e)
    k, lam = verdict.kernel_vector, verdict.character
    weights: dict[int, Poly] = {}
    for sign, scale in ((1, Fraction(1)), (-1, -lam)):
        prefix = Poly.one(dim)
        for i, ki in enumerate(k):
            if ki * sign <= 0:
                continue
            u = Poly.monomial(blocks[i].e, blocks[i].c)
            for _ in range(abs(ki)):
                weights[i] = weights.get(i, Poly.zero(dim)) + prefix * scale
                prefix = prefix * u
    weights = {i: w * (1 / (1 - lam)) for i, w in weights.items()}
    check = sum((w * blocks[i].factor() for i, w in weights.items()), Poly.zero(dim))
    if check != 1:
        raise VerificationError("splitting identity does not reduce to 1.")
    return [
        (_reduced(blocks, {i: blocks[i].mult - 1}), w) for i, w in sorted(weights.items())
    ]


def _to_fraction(value: sympy.Rational) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _annihilating_relation(
    blocks: Sequence[Block], involved: Sequence[int], k: Sequence[int]
) -> list[tuple[tuple[int, ...], Fraction]]:
    """Returns a nonzero polynomial relation between X_i = (1 - u_i)^mult_i, i in involved.

    The monomials u_i satisfy prod_{k_i > 0} u_i^k_i = prod_{k_i < 0} u_i^-k_i because the
    character is trivial; eliminating u_i against X_i - (1 - u_i)^mult_i by resultants
    leaves a relation in the X_i alone.
    """
    v = sympy.symbols(f"v0:{len(involved)}")
    xs = sympy.symbols(f"X0:{len(involved)}")
    positive, negative = sympy.Integer(1), sympy.Integer(1)
    for j, i in enumerate(involved):
        if k[i] > 0:
            positive *= v[j] ** k[i]
        else:
            negative *= v[j] ** (-k[i])
    relation = sympy.expand(positive - negative)
    for j, i in enumerate(involved):
        relation = sympy.resultant(relation, (1 - v[j]) ** blocks[i].mult - xs[j], v[j])
    terms = sympy.Poly(relation, *xs).terms()
    return [(tuple(int(a) for a in monom), _to_fraction(c)) for monom, c in terms if c]


def _split_common_root(blocks: tuple[Block, ...], verdict: KernelVerdict) -> list[Piece]:
    """Removes at least one distinct block per summand using an annihilating relation.

    With Phi(X) = sum phi_a X^a vanishing at X_i = (1 - u_i)^mult_i and a* a monomial of
    minimal total degree, 1 / prod X_i = -sum_{a != a*} (phi_a / phi_a*) X^(a - a* - 1).
    Every a != a* exceeds a* in some coordinate, which drops that block; other
    multiplicities may grow.
    """
    dim = len(blocks[0].e)
    k = verdict.kernel_vector
    involved = [i for i, ki in enumerate(k) if ki]
    relation = _annihilating_relation(blocks, involved, k)
    if not relation:
        raise VerificationError("elimination produced an empty relation.")
    powers = [blocks[i].factor() ** blocks[i].mult for i in involved]
    check = Poly.zero(dim)
    for alpha, coeff in relation:
        term = Poly.constant(dim, coeff)
        for p, a in zip(powers, alpha):
            term = term * p**a
        check = check + term
    if check:
        raise VerificationError("annihilating relation does not vanish on the blocks.")
    lowest = min(alpha for alpha, _ in relation if sum(alpha) == min(sum(a) for a, _ in relation))
    pivot = dict(relation)[lowest]
    pieces = []
    for alpha, coeff in relation:
        if alpha == lowest:
            continue
        multiplier = Poly.constant(dim, -coeff / pivot)
        changes = {}
        for j, i in enumerate(involved):
            delta = alpha[j] - lowest[j] - 1
            if delta >= 0:
                multiplier = multiplier * powers[j] ** delta
                changes[i] = 0
            else:
                changes[i] = blocks[i].mult * -delta
        pieces.append((_reduced(blocks, changes), multiplier))
    return pieces


@default_limits
def leinartas_decompose(
    r: UnitProductRational, *, limits: Optional[Limits] = None
) -> list[DecompTerm]:
    """Rewrites r as a sum of fractions whose blocks have independent exponent vectors.

    Fractions are processed largest total multiplicity first and numerators of identical
    denominators are merged. Blocks without a common root are split with the explicit
    identity; dependent blocks with a common root are split with an annihilating
    relation. The result is checked as an exact rational identity.

    Raises:
      CapabilityError: If more than split_budget splitting steps are needed.
      VerificationError: If an exact identity check fails.
    """
    if r.is_zero():
        return []
    pending: dict[tuple[Block, ...], Poly] = {r.blocks: r.numerator}
    done: dict[tuple[Block, ...], Poly] = {}
    steps = 0
    while pending:
        blocks = max(pending, key=lambda b: (sum(x.mult for x in b), len(b), b))
        numerator = pending.pop(blocks)
        if not numerator:
            continue
        verdict = kernel_character_test(blocks) if blocks else KernelVerdict(INDEPENDENT)
        if verdict.kind == INDEPENDENT:
            done[blocks] = done.get(blocks, Poly.zero(r.dim)) + numerator
            continue
        steps += 1
        if steps > limits.split_budget:
            raise CapabilityError(
                f"decomposition exceeded the split budget of {limits.split_budget} steps."
            )
        if verdict.kind == NO_COMMON_ROOT:
            pieces = _split_no_common_root(blocks, verdict)
        else:
            # The annihilating relation comes from resultants of the block factors,
            # not from triangulating the denominator and interpolating.
            pieces = _split_common_root(blocks, verdict)
        logger.debug(
            "Split %d blocks (%s, k=%s) into %d fractions",
            len(blocks),
            verdict.kind,
            verdict.kernel_vector,
            len(pieces),
        )
        for target, multiplier in pieces:
            pending[target] = pending.get(target, Poly.zero(r.dim)) + numerator * multiplier
    terms = [
        DecompTerm(r.dim, numerator, blocks, independent_verified=True)
        for blocks, numerator in sorted(done.items())
        if numerator
    ]
    if limits.exact_verify and not rational_identity(terms, [r]):
        raise VerificationError("decomposition is not identical to its input.")
    logger.info("Decomposed into %d terms after %d splitting steps", len(terms), steps)
    return terms
