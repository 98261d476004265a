import itertools
from fractions import Fraction

import pytest
import sympy

from bezivin.errors import CapabilityError, InputError
from bezivin.intlat import (IntMatrix, hilbert_basis, hnf, independent,
                            kernel, rank, rational_coordinates,
                            solve_integer, solve_nonneg)
from bezivin.settings import Limits


@pytest.mark.parametrize(
    "rows,expected_h",
    [
        ([[2, 4], [1, 3]], [[1, 1], [0, 2]]),
        ([[3, 1]], [[3, 1]]),
        ([[2, 0], [0, 3], [4, 6]], [[2, 0], [0, 3], [0, 0]]),
    ],
)
def test_hnf(rows, expected_h):
    a = IntMatrix.from_rows(rows)
    h, u, _ = hnf(a)
    assert h.to_rows() == expected_h
    assert (u @ a).to_rows() == expected_h


@pytest.mark.parametrize(
    "rows,expected",
    [
        ([[3, 1]], [(1, -3)]),
        ([[1, 0, 1], [0, 1, 1]], [(1, 1, -1)]),
        ([[1, 0], [0, 1]], []),
    ],
)
def test_kernel(rows, expected):
    assert kernel(IntMatrix.from_rows(rows)) == expected


def test_kernel_random(rng):
    for _ in range(20):
        rows = [[rng.randint(-4, 4) for _ in range(4)] for _ in range(2)]
        a = IntMatrix.from_rows(rows)
        basis = kernel(a)
        assert all(not any(a.apply(v)) for v in basis)
        assert len(basis) == 4 - rank(rows)


@pytest.mark.parametrize(
    "vectors,expected",
    [
        ([(1, 0), (0, 1)], True),
        ([(1, 2), (2, 4)], False),
        ([(1, 1, 0), (0, 1, 1), (1, 0, -1)], False),
    ],
)
def test_independent(vectors, expected):
    assert independent(vectors) is expected


@pytest.mark.parametrize(
    "rows,b,solvable",
    [
        ([[2, 4]], [6], True),
        ([[2, 4]], [3], False),
        ([[1, 1], [1, -1]], [3, 1], True),
        ([[1, 1], [1, -1]], [3, 0], False),
    ],
)
def test_solve_integer(rows, b, solvable):
    a = IntMatrix.from_rows(rows)
    x = solve_integer(a, b)
    if solvable:
        assert a.apply(x) == tuple(b)
    else:
        assert x is None


def test_solve_integer_rejects_shape():
    with pytest.raises(InputError):
        solve_integer(IntMatrix.from_rows([[1, 2]]), [1, 2])


def test_rational_coordinates():
    assert rational_coordinates([(4, 2, 0), (0, 0, 2)], (2, 1, 0)) == [
        Fraction(1, 2),
        Fraction(0),
    ]
    assert rational_coordinates([(1, 0)], (0, 1)) is None


@pytest.mark.parametrize(
    "rows,expected",
    [
        ([[1, 1, -1]], [(0, 1, 1), (1, 0, 1)]),
        ([[2, -1]], [(1, 2)]),
        ([[1, -2, 1]], [(0, 1, 2), (1, 1, 1), (2, 1, 0)]),
        ([[1, 2]], []),
    ],
)
def test_hilbert_basis(rows, expected):
    assert hilbert_basis(IntMatrix.from_rows(rows)) == expected


def test_hilbert_basis_random(rng):
    for _ in range(10):
        a = IntMatrix.from_rows([[rng.randint(-3, 3) for _ in range(3)]])
        basis = hilbert_basis(a)
        assert all(not any(a.apply(h)) for h in basis)
        for x in itertools.product(range(5), repeat=3):
            if any(x) and not any(a.apply(x)):
                assert any(all(h_i <= x_i for h_i, x_i in zip(h, x)) for h in basis)


def test_hilbert_basis_frontier_cap():
    with pytest.raises(CapabilityError):
        hilbert_basis(IntMatrix.from_rows([[7, -5, 3, -11]]), limits=Limits(frontier_cap=5))


@pytest.mark.parametrize(
    "rows,b,minimal,homogeneous",
    [
        ([[1, 1]], [2], ((0, 2), (1, 1), (2, 0)), ()),
        ([[1, 1, -1]], [0], ((0, 0, 0),), ((0, 1, 1), (1, 0, 1))),
        ([[1, -1]], [1], ((1, 0),), ((1, 1),)),
        ([[2]], [3], (), ()),
    ],
)
def test_solve_nonneg(rows, b, minimal, homogeneous):
    solution = solve_nonneg(IntMatrix.from_rows(rows), b)
    assert solution.minimal_inhomogeneous == minimal
    assert solution.hilbert_basis == homogeneous
    assert solution.is_empty() is (not minimal)


def test_hnf_random(rng):
    for _ in range(20):
        rows = [[rng.randint(-5, 5) for _ in range(3)] for _ in range(rng.randint(1, 4))]
        a = IntMatrix.from_rows(rows)
        h, u, basis = hnf(a)
        assert (u @ a) == h
        assert abs(sympy.Matrix(u.to_rows()).det()) == 1
        assert hnf(h)[0] == h
        assert len(basis) == 3 - rank(rows)
        pivots = [next((j for j, x in enumerate(r) if x), None) for r in h.to_rows()]
        nonzero = [p for p in pivots if p is not None]
        assert nonzero == sorted(set(nonzero))
        for i, p in enumerate(pivots):
            if p is None:
                continue
            assert h.row(i)[p] > 0
            assert all(0 <= h.row(k)[p] < h.row(i)[p] for k in range(i))


def test_solve_integer_random(rng):
    for _ in range(20):
        a = IntMatrix.from_rows([[rng.randint(-4, 4) for _ in range(3)] for _ in range(2)])
        x = tuple(rng.randint(-3, 3) for _ in range(3))
        solution = solve_integer(a, a.apply(x))
        assert a.apply(solution) == a.apply(x)


@pytest.mark.parametrize(
    "vectors,target,expected",
    [
        ([(2, 0), (0, 3)], (1, 3), [Fraction(1, 2), Fraction(1)]),
        ([(2, 4), (1, 3)], (3, 7), [Fraction(3), Fraction(2)]),
        ([(1, 1)], (1, 2), None),
        ([], (0, 0), []),
        ([], (1, 0), None),
    ],
)
def test_rational_coordinates_table(vectors, target, expected):
    assert rational_coordinates(vectors, target) == expected
