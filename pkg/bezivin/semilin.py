"""Simple linear and semilinear subsets of N^d.

A simple linear set a + b_1 N + ... + b_s N has linearly independent periods, so every
member has unique local coordinates. Periods are kept in descending lexicographic order,
which makes structural equality coincide with set equality.
"""

import dataclasses
import itertools
import logging
from collections.abc import Iterable, Iterator, Sequence
from typing import Optional, Union

from . import exactnum, intlat
from .errors import InputError
from .patterns import SET_PART_SEPARATOR_PATTERN
from .settings import Limits

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]


def _add(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def _scale(k: int, v: Sequence[int]) -> Vector:
    return tuple(k * a for a in v)


def _combine(offset: Sequence[int], coords: Sequence[int], periods: Sequence[Vector]) -> Vector:
    point = tuple(offset)
    for m, p in zip(coords, periods):
        if m:
            point = _add(point, _scale(m, p))
    return point


@dataclasses.dataclass(frozen=True)
class SimpleLinearSet:
    """offset + periods[0] N + ... + periods[s-1] N with independent periods."""

    offset: Vector
    periods: tuple[Vector, ...] = ()

    def __post_init__(self) -> None:
        offset = tuple(int(x) for x in self.offset)
        periods = tuple(sorted((tuple(int(x) for x in p) for p in self.periods), reverse=True))
        if not offset:
            raise InputError("simple linear sets must live in N^d with d >= 1.")
        if any(x < 0 for x in offset):
            raise InputError(f"offset {offset} has a negative entry.")
        for p in periods:
            if len(p) != len(offset):
                raise InputError(f"period {p} does not have {len(offset)} coordinates.")
            if any(x < 0 for x in p) or not any(p):
                raise InputError(f"period {p} must be a nonzero vector in N^{len(offset)}.")
        if not intlat.independent(periods):
            raise InputError(f"periods {periods} are not linearly independent.")
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "periods", periods)

    @classmethod
    def parse(cls, text: str) -> "SimpleLinearSet":
        """Parses ``"a1,...,ad ; b11,...,b1d ; ..."`` (offset first, then periods)."""
        parts = [p for p in SET_PART_SEPARATOR_PATTERN.split(text.strip()) if p]
        if not parts:
            raise InputError("a set literal needs at least an offset.")
        return cls(exactnum.parse_vector(parts[0]), tuple(map(exactnum.parse_vector, parts[1:])))

    @property
    def dim(self) -> int:
        return len(self.offset)

    @property
    def rank(self) -> int:
        return len(self.periods)

    def point(self, coords: Sequence[int]) -> Vector:
        """Maps local coordinates to the point offset + sum(coords[i] * periods[i])."""
        return _combine(self.offset, coords, self.periods)

    def sort_key(self) -> tuple:
        return (self.offset, self.periods)

    def __str__(self) -> str:
        return " ; ".join(",".join(map(str, v)) for v in (self.offset,) + self.periods)


def permutation_to_canonical(periods: Sequence[Sequence[int]]) -> list[int]:
    """Returns indices listing the given periods in the canonical (stored) order."""
    return sorted(range(len(periods)), key=lambda i: tuple(periods[i]), reverse=True)


@dataclasses.dataclass(frozen=True)
class SemilinearSet:
    """A finite union of simple linear sets."""

    components: tuple[SimpleLinearSet, ...] = ()
    disjoint: bool = False

    def is_empty(self) -> bool:
        return not self.components

    def contains(self, n: Sequence[int]) -> bool:
        return any(member_coords(n, s) is not None for s in self.components)


@dataclasses.dataclass(frozen=True)
class Containment:
    """Certificate that Sub is inside Sup.

    ``mu`` are Sup-coordinates of Sub.offset and row i of ``t`` holds the Sup-coordinates
    of Sub.periods[i]; all entries are nonnegative.
    """

    mu: Vector
    t: tuple[Vector, ...]


def _coordinates(vector: Sequence[int], periods: Sequence[Vector]) -> Optional[list[int]]:
    if not periods:
        return [] if not any(vector) else None
    matrix = intlat.IntMatrix.from_columns(periods, rows=len(vector))
    return intlat.solve_integer(matrix, vector)


def member_coords(n: Sequence[int], s: SimpleLinearSet) -> Optional[Vector]:
    """Returns the unique m in N^s with n = offset + sum(m_i * period_i), or None.

    Examples:
      (2, 5) in (0,1) + (1,1)N + (0,1)N gives (2, 2); (1, 2) in (1,1)N gives None.
    """
    if len(n) != s.dim:
        raise InputError(f"point {tuple(n)} does not have {s.dim} coordinates.")
    coords = _coordinates([a - b for a, b in zip(n, s.offset)], s.periods)
    if coords is None or any(m < 0 for m in coords):
        return None
    return tuple(coords)


def contains_simple(sub: SimpleLinearSet, sup: SimpleLinearSet) -> Optional[Containment]:
    """Returns a containment certificate iff sub is a subset of sup."""
    if sub.dim != sup.dim:
        raise InputError("containment needs sets of the same dimension.")
    mu = member_coords(sub.offset, sup)
    if mu is None:
        return None
    rows = []
    for period in sub.periods:
        coords = _coordinates(period, sup.periods)
        if coords is None or any(t < 0 for t in coords):
            return None
        rows.append(tuple(coords))
    return Containment(mu, tuple(rows))


def equal_sets(s1: SimpleLinearSet, s2: SimpleLinearSet) -> bool:
    """Set equality by mutual containment."""
    return contains_simple(s1, s2) is not None and contains_simple(s2, s1) is not None


def _standard_regions(
    corner: list[int], free: tuple[int, ...], leading: list[Vector]
) -> Iterator[tuple[Vector, tuple[int, ...]]]:
    """Splits corner + N^free minus a monomial ideal into disjoint regions."""
    fixed = [i for i in range(len(corner)) if i not in free]
    hitting = [g for g in leading if all(g[i] <= corner[i] for i in fixed)]
    if not hitting:
        yield tuple(corner), free
        return
    for g in hitting:
        if all(g[i] <= corner[i] for i in free):
            return
    g = hitting[0]
    j = next(i for i in free if g[i] > corner[i])
    rest = tuple(i for i in free if i != j)
    for value in range(corner[j], g[j]):
        yield from _standard_regions(corner[:j] + [value] + corner[j + 1 :], rest, leading)
    yield from _standard_regions(corner[:j] + [g[j]] + corner[j + 1 :], free, leading)


def disjoint_pieces(
    offsets: Iterable[Sequence[int]],
    generators: Iterable[Sequence[int]],
    *,
    limits: Optional[Limits] = None,
) -> list[tuple[Vector, tuple[Vector, ...]]]:
    """Writes the union of offset_i + N(generators) as disjoint simple linear pieces.

    Generators may be linearly dependent and translates may overlap. Every point of the
    union has exactly one standard preimage under (n, i) -> offset_i + sum(n_j g_j) with
    respect to the lexicographic order; standard preimages are the complement of the
    initial ideal of the toric relations, whose generators are read off the Graver basis
    (the Hilbert basis of the Lawrence lifting). That complement splits into disjoint
    corner + N^J regions on which the map is injective.
    """
    offsets = sorted({tuple(o) for o in offsets})
    gens = sorted({tuple(g) for g in generators if any(g)})
    if not offsets:
        return []
    if len(offsets) == 1 and intlat.independent(gens):
        return [(offsets[0], tuple(gens))]
    dim = len(offsets[0])
    t, p = len(gens), len(offsets)
    lifted = [g + (0,) for g in gens] + [o + (1,) for o in offsets]
    n = t + p
    lawrence = intlat.IntMatrix.from_columns(
        lifted + [tuple(-x for x in v) for v in lifted], rows=dim + 1
    )
    leading = []
    for element in intlat.hilbert_basis(lawrence, limits=limits):
        u, v = element[:n], element[n:]
        if u != v:
            leading.append(max(u, v))
    leading = sorted(
        g for g in set(leading) if not any(h != g and all(a <= b for a, b in zip(h, g)) for h in leading)
    )
    pieces = []
    for i in range(p):
        corner = [0] * n
        corner[t + i] = 1
        for region, free in _standard_regions(corner, tuple(range(t)), leading):
            point = _combine(offsets[i], region[:t], gens)
            pieces.append((point, tuple(gens[j] for j in free)))
    return sorted(pieces)


def intersect_simple(
    s1: SimpleLinearSet, s2: SimpleLinearSet, *, limits: Optional[Limits] = None
) -> SemilinearSet:
    """Exact intersection of two simple linear sets as a disjoint semilinear set.

    Solves s1.offset + B1.m = s2.offset + B2.m' over N, then decomposes the solutions,
    read in the local coordinates of s1, into disjoint simple linear pieces.
    """
    if s1.dim != s2.dim:
        raise InputError("intersection needs sets of the same dimension.")
    columns = list(s1.periods) + [_scale(-1, p) for p in s2.periods]
    rhs = tuple(b - a for a, b in zip(s1.offset, s2.offset))
    if not columns:
        components = (s1,) if s1.offset == s2.offset else ()
        return SemilinearSet(components, disjoint=True)
    system = intlat.IntMatrix.from_columns(columns, rows=s1.dim)
    solution = intlat.solve_nonneg(system, rhs, limits=limits)
    r = s1.rank
    local = disjoint_pieces(
        (m[:r] for m in solution.minimal_inhomogeneous),
        (h[:r] for h in solution.hilbert_basis),
        limits=limits,
    )
    components = tuple(
        sorted(
            (
                SimpleLinearSet(
                    s1.point(c), tuple(_combine((0,) * s1.dim, g, s1.periods) for g in gens)
                )
                for c, gens in local
            ),
            key=SimpleLinearSet.sort_key,
        )
    )
    return SemilinearSet(components, disjoint=True)


def is_disjoint(s1: SimpleLinearSet, s2: SimpleLinearSet, *, limits: Optional[Limits] = None) -> bool:
    return _common_point_exists([s1, s2], limits=limits) is False


def _common_point_exists(sets: Sequence[SimpleLinearSet], *, limits: Optional[Limits] = None) -> bool:
    first, rest = sets[0], sets[1:]
    if not rest:
        return True
    width = sum(s.rank for s in sets)
    rows, rhs = [], []
    for index, other in enumerate(rest):
        for coord in range(first.dim):
            row = [0] * width
            for j, p in enumerate(first.periods):
                row[j] = p[coord]
            start = first.rank + sum(s.rank for s in rest[:index])
            for j, p in enumerate(other.periods):
                row[start + j] = -p[coord]
            rows.append(row)
            rhs.append(other.offset[coord] - first.offset[coord])
    if width == 0:
        return not any(rhs)
    system = intlat.IntMatrix.from_rows(rows, cols=width)
    return not intlat.solve_nonneg(system, rhs, limits=limits).is_empty()


def coset_refine(s: SimpleLinearSet, indices: Sequence[int]) -> list[SimpleLinearSet]:
    """Splits s along residues of its local coordinates.

    Args:
      s: The set.
      indices: One positive index n_i per period (in stored order).

    Returns:
      The prod(n_i) pieces offset + sum(j_i p_i) + sum(n_i p_i N), j_i in [0, n_i - 1],
      which partition s.
    """
    if len(indices) != s.rank:
        raise InputError(f"expected {s.rank} indices, got {len(indices)}.")
    if any(n < 1 for n in indices):
        raise InputError(f"indices {tuple(indices)} must be positive.")
    periods = tuple(_scale(n, p) for n, p in zip(indices, s.periods))
    return [
        SimpleLinearSet(s.point(j), periods)
        for j in itertools.product(*(range(n) for n in indices))
    ]


def max_overlap(
    sets: Sequence[SimpleLinearSet], *, limits: Optional[Limits] = None
) -> tuple[int, tuple[int, ...]]:
    """Returns the largest k such that some k of the sets share a point.

    Returns:
      (k, witness) where witness lists the indices of one maximal subset; (0, ()) for an
      empty list.
    """
    if not sets:
        return 0, ()
    for k in range(len(sets), 1, -1):
        for subset in itertools.combinations(range(len(sets)), k):
            if _common_point_exists([sets[i] for i in subset], limits=limits):
                return k, subset
    return 1, (0,)


def _enumerate_simple(s: SimpleLinearSet, bound: int) -> Iterator[Vector]:
    def walk(point: Vector, index: int) -> Iterator[Vector]:
        if index == s.rank:
            yield point
            return
        period = s.periods[index]
        while sum(point) <= bound:
            yield from walk(point, index + 1)
            point = _add(point, period)

    if sum(s.offset) <= bound:
        yield from walk(s.offset, 0)


def enumerate_upto(s: Union[SemilinearSet, SimpleLinearSet], bound: int) -> list[Vector]:
    """All points of the set with total degree at most ``bound``, lexicographically."""
    if bound < 0:
        raise InputError(f"bound must be nonnegative, got {bound}.")
    components = (s,) if isinstance(s, SimpleLinearSet) else s.components
    return sorted({p for c in components for p in _enumerate_simple(c, bound)})


def power_fiber(
    lambdas: Sequence[exactnum.RationalLike],
    c: exactnum.RationalLike,
    *,
    limits: Optional[Limits] = None,
) -> SemilinearSet:
    """Returns {n in N^d : prod(lambda_i ** n_i) == c} as a disjoint semilinear set.

    Prime exponents give one equation per prime; the sign gives a parity equation lifted
    to Z with an auxiliary variable.
    """
    factored = [exactnum.factor_rational(x) for x in lambdas]
    target = exactnum.factor_rational(c)
    d = len(factored)
    if d == 0:
        raise InputError("power fibers need at least one base.")
    primes = sorted(set().union(target.primes(), *(f.primes() for f in factored)))
    rows = [[f.exponent(q) for f in factored] + [0] for q in primes]
    rows.append([0 if f.sign > 0 else 1 for f in factored] + [-2])
    rhs = [target.exponent(q) for q in primes] + [0 if target.sign > 0 else 1]
    system = intlat.IntMatrix.from_rows(rows, cols=d + 1)
    solution = intlat.solve_nonneg(system, rhs, limits=limits)
    pieces = disjoint_pieces(
        (m[:d] for m in solution.minimal_inhomogeneous),
        (h[:d] for h in solution.hilbert_basis),
        limits=limits,
    )
    return SemilinearSet(
        tuple(SimpleLinearSet(o, g) for o, g in pieces), disjoint=True
    )


def _interval_splits(value: int, step: int, fixed: bool) -> list[tuple[int, int]]:
    """1-d pieces (start, period) of N minus {value + step N} (or minus {value})."""
    pieces = [(v, 0) for v in range(value)]
    if fixed:
        pieces.append((value + 1, 1))
    else:
        pieces.extend((value + r, step) for r in range(1, step))
    return pieces


def split_off(
    sup: SimpleLinearSet, sub: SimpleLinearSet
) -> Optional[list[SimpleLinearSet]]:
    """Returns disjoint simple linear pieces covering sup minus sub.

    Only containments whose certificate maps each period of sub onto a multiple of a
    distinct period of sup are handled; other shapes give None.
    """
    cert = contains_simple(sub, sup)
    if cert is None:
        raise InputError(f"{sub} is not contained in {sup}.")
    steps: dict[int, int] = {}
    for row in cert.t:
        support = [j for j, x in enumerate(row) if x]
        if len(support) != 1 or support[0] in steps:
            return None
        steps[support[0]] = row[support[0]]
    pieces = []
    for j in range(sup.rank):
        for start, step in _interval_splits(cert.mu[j], steps.get(j, 1), j not in steps):
            offset = [0] * sup.rank
            gens = []
            for i in range(j):
                offset[i] = cert.mu[i]
                if i in steps:
                    gens.append((i, steps[i]))
            offset[j] = start
            if step:
                gens.append((j, step))
            gens.extend((i, 1) for i in range(j + 1, sup.rank))
            pieces.append(
                SimpleLinearSet(
                    sup.point(offset),
                    tuple(_scale(k, sup.periods[i]) for i, k in gens),
                )
            )
    return sorted(pieces, key=SimpleLinearSet.sort_key)
