"""Integer linear algebra: Hermite normal forms, integer kernels and nonnegative
solutions of linear Diophantine systems.

Hermite normal forms and rational elimination run on sympy DomainMatrix over ZZ and QQ;
nonnegative solutions come from a Contejean-Devie style completion.
"""

import dataclasses
import logging
from collections.abc import Iterable, Sequence
from fractions import Fraction
from typing import Optional

from sympy import QQ, ZZ
from sympy.polys.domains.domain import Domain
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form

from .errors import CapabilityError, InputError
from .settings import Limits, resolve

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]


@dataclasses.dataclass(frozen=True)
class IntMatrix:
    """A rows x cols integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"a {self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}."
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        if cols is None:
            if not rows:
                raise ValueError("cols must be given for a matrix without rows.")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("all rows must have the same length.")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        return cls.from_rows(
            [[col[i] for col in columns] for i in range(rows)], cols=len(columns)
        )

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def to_columns(self) -> list[list[int]]:
        return [[self.entries[i * self.cols + j] for i in range(self.rows)] for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(self.to_columns(), cols=self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("matrix dimensions do not match.")
        cols = other.to_columns()
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(self.row(i), c)) for c in cols] for i in range(self.rows)],
            cols=other.cols,
        )

    def apply(self, x: Sequence[int]) -> Vector:
        """Returns the matrix-vector product A.x."""
        if len(x) != self.cols:
            raise ValueError(f"expected a vector of length {self.cols}, got {len(x)}.")
        return tuple(sum(a * b for a, b in zip(self.row(i), x)) for i in range(self.rows))


def _domain_matrix(rows: Sequence[Sequence[int]], domain: Domain = ZZ) -> DomainMatrix:
    return DomainMatrix.from_list([[int(x) for x in r] for r in rows], domain)


def _row_hnf(rows: Sequence[Sequence[int]], ncols: int) -> tuple[list[list[int]], list[list[int]]]:
    """Row Hermite normal form H of the rows together with a unimodular U, U.A = H.

    sympy reduces columns from the bottom row up and keeps pivots on the right, so it is
    handed [A | I] transposed with both axes reversed; the identity block becomes U.
    """
    m = len(rows)
    if not m:
        return [], []
    width = ncols + m
    augmented = [list(r) + [int(i == j) for j in range(m)] for i, r in enumerate(rows)]
    flipped = [[augmented[m - 1 - j][width - 1 - i] for j in range(m)] for i in range(width)]
    reduced = hermite_normal_form(_domain_matrix(flipped)).to_list()
    full = [[int(reduced[width - 1 - b][m - 1 - a]) for b in range(width)] for a in range(m)]
    return [r[:ncols] for r in full], [r[ncols:] for r in full]


def kernel(a: IntMatrix) -> list[Vector]:
    """Returns a canonical Z-basis of {x : A.x = 0}, itself in row Hermite normal form."""
    h, v = _row_hnf(a.to_columns(), a.rows)
    return [tuple(v[i]) for i in range(a.cols) if not any(h[i])]


def hnf(a: IntMatrix) -> tuple[IntMatrix, IntMatrix, list[Vector]]:
    """Computes the row Hermite normal form.

    Args:
      a: An integer matrix.

    Returns:
      (H, U, K) with U unimodular, U @ A == H in row Hermite normal form (positive
      pivots, entries above a pivot reduced into [0, pivot), zero rows last) and K a
      Z-basis of the kernel {x : A.x = 0}. For rows (2, 4), (1, 3) this gives
      H = ((1, 1), (0, 2)); for the single row (3, 1) the kernel is ((1, -3),).
    """
    h, u = _row_hnf(a.to_rows(), a.cols)
    return (
        IntMatrix.from_rows(h, cols=a.cols),
        IntMatrix.from_rows(u, cols=a.rows),
        kernel(a),
    )


def rank(vectors: Sequence[Sequence[int]]) -> int:
    """Returns the rank of a list of integer vectors."""
    if not vectors or not len(vectors[0]):
        return 0
    return _domain_matrix(vectors, QQ).rank()


def independent(vectors: Sequence[Sequence[int]]) -> bool:
    return rank(vectors) == len(vectors)


def _span_coordinates(
    basis: Sequence[Sequence[int]], target: Sequence[int]
) -> Optional[list[Fraction]]:
    """Coefficients of target over linearly independent rows, None outside their span."""
    if not basis:
        return None if any(target) else []
    system = _domain_matrix(
        [[row[j] for row in basis] + [target[j]] for j in range(len(target))], QQ
    )
    reduced, pivots = system.rref()
    if len(basis) in pivots:
        return None
    entries = reduced.to_list()
    return [
        Fraction(int(entries[i][-1].numerator), int(entries[i][-1].denominator))
        for i in range(len(basis))
    ]


def solve_integer(a: IntMatrix, b: Sequence[int]) -> Optional[list[int]]:
    """Returns some x in Z^cols with A.x = b, or None when no integer solution exists."""
    if len(b) != a.rows:
        raise InputError(f"right-hand side must have {a.rows} entries, got {len(b)}.")
    h, v = _row_hnf(a.to_columns(), a.rows)
    pivots = [i for i in range(a.cols) if any(h[i])]
    coords = _span_coordinates([h[i] for i in pivots], b)
    if coords is None or any(q.denominator != 1 for q in coords):
        return None
    x = [0] * a.cols
    for q, i in zip(coords, pivots):
        x = [xi + int(q) * vi for xi, vi in zip(x, v[i])]
    return x


def rational_coordinates(
    vectors: Sequence[Sequence[int]], target: Sequence[int]
) -> Optional[list[Fraction]]:
    """Rational coordinates of target over a Z-basis of the lattice spanned by vectors.

    Returns None when target is outside the rational span. The lattice basis is the row
    Hermite normal form of the vectors, so target lies in the lattice iff every returned
    coordinate is an integer.
    """
    if not vectors:
        return [] if not any(target) else None
    h, _ = _row_hnf(vectors, len(target))
    return _span_coordinates([r for r in h if any(r)], target)


@dataclasses.dataclass(frozen=True)
class DiophantineSolution:
    """All nonnegative solutions of A.x = b as minimal + N-span(hilbert_basis)."""

    minimal_inhomogeneous: tuple[Vector, ...]
    hilbert_basis: tuple[Vector, ...]

    def is_empty(self) -> bool:
        return not self.minimal_inhomogeneous


def _dominated(x: Vector, basis: Iterable[Vector]) -> bool:
    return any(all(bi <= xi for bi, xi in zip(b, x)) for b in basis)


def hilbert_basis(
    a: IntMatrix,
    *,
    caps: Optional[dict[int, int]] = None,
    limits: Optional[Limits] = None,
) -> list[Vector]:
    """Minimal nonzero solutions of A.x = 0 over N^cols by completion.

    The frontier starts at the unit vectors; a non-solution p is extended by e_j only when
    <A.p, A.e_j> < 0, and candidates dominated by a found solution are pruned.

    Args:
      a: The homogeneous system.
      caps: Optional per-variable upper bounds; minimal solutions exceeding a cap are
        not searched for (used to keep the homogenizing variable at most 1).
      limits: Resource limits; the frontier cap bounds the explored nodes.

    Raises:
      CapabilityError: If the explored frontier exceeds the frontier cap.
    """
    limits = resolve(limits)
    caps = caps or {}
    n = a.cols
    columns = [tuple(c) for c in a.to_columns()]
    units = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    frontier = set(units)
    basis: list[Vector] = []
    explored = 0
    while frontier:
        explored += len(frontier)
        if explored > limits.frontier_cap:
            raise CapabilityError(
                f"Hilbert basis completion exceeded {limits.frontier_cap} nodes."
            )
        images = {p: a.apply(p) for p in frontier}
        solutions = sorted(p for p, img in images.items() if not any(img))
        basis.extend(solutions)
        successors = set()
        for p in sorted(frontier):
            img = images[p]
            if not any(img):
                continue
            for j in range(n):
                if sum(x * y for x, y in zip(img, columns[j])) >= 0:
                    continue
                if p[j] + 1 > caps.get(j, p[j] + 1):
                    continue
                q = p[:j] + (p[j] + 1,) + p[j + 1 :]
                if not _dominated(q, basis):
                    successors.add(q)
        frontier = successors
    logger.debug("Hilbert basis of %dx%d system: %d elements", a.rows, n, len(basis))
    return sorted(basis)


def solve_nonneg(
    a: IntMatrix, b: Sequence[int], *, limits: Optional[Limits] = None
) -> DiophantineSolution:
    """Describes {x in N^cols : A.x = b}.

    The system is homogenized as A.x - b.t = 0; Hilbert basis elements with t = 0 form the
    homogeneous basis and those with t = 1 are the minimal inhomogeneous solutions.

    Args:
      a: The coefficient matrix.
      b: The right-hand side.
      limits: Resource limits.

    Returns:
      A DiophantineSolution; both lists are empty iff there is no solution. For instance
      A = (1, 1, -1), b = (0,) gives hilbert_basis ((0, 1, 1), (1, 0, 1)) and minimal
      ((0, 0, 0),).

    Raises:
      CapabilityError: If the completion frontier exceeds the configured cap.
    """
    if len(b) != a.rows:
        raise InputError(f"right-hand side must have {a.rows} entries, got {len(b)}.")
    rows = a.to_rows()
    for row, bi in zip(rows, b):
        row.append(-int(bi))
    extended = IntMatrix.from_rows(rows, cols=a.cols + 1)
    elements = hilbert_basis(extended, caps={a.cols: 1}, limits=limits)
    minimal = tuple(sorted(e[:-1] for e in elements if e[-1] == 1))
    if not minimal:
        return DiophantineSolution((), ())
    homogeneous = tuple(sorted(e[:-1] for e in elements if e[-1] == 0))
    return DiophantineSolution(minimal, homogeneous)
