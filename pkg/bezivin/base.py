from collections.abc import Sequence
from fractions import Fraction
from typing import Protocol, Union

from .polys import Exponent, Poly

Number = Union[int, Fraction]


class CoefficientSource(Protocol):
    """Anything that can report the coefficient of x^n of a series in ``dim`` variables."""

    dim: int

    def coefficient(self, n: Sequence[int]) -> Fraction:
        ...


class BlockProto(Protocol):
    """One denominator factor (1 - c * x^e)^mult."""

    c: Fraction
    e: Exponent
    mult: int


class UnitProductProto(Protocol):
    """Defines the attributes that unit-product rational functions must expose."""

    dim: int
    numerator: Poly
    blocks: Sequence[BlockProto]
