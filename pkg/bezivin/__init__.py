"""Exact analysis of rational series with unit-product denominators!

Decompose sums of fractions P/prod(1 - c x^e)^b into independent pieces, read their
coefficients as exponential polynomials on simple linear sets and decide whether the
series is a Polya or Bezivin series over a finitely generated subgroup of Q*.
"""

__version__ = "0.1.0"

from . import (
    exactnum,
    intlat,
    leinartas,
    oracle,
    parser,
    pipeline,
    polyexp,
    precursive,
    semilin,
    skewgeom,
)

__all__ = (
    "exactnum",
    "intlat",
    "leinartas",
    "oracle",
    "parser",
    "pipeline",
    "polyexp",
    "precursive",
    "semilin",
    "skewgeom",
)
