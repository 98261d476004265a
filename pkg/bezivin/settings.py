"""Limits and defaults shared by the pipeline."""

import dataclasses
import functools
import os
from collections.abc import Callable
from typing import Optional, TypeVar

from typing_extensions import ParamSpec

P = ParamSpec("P")
T = TypeVar("T")


@dataclasses.dataclass(frozen=True)
class Limits:
    """Resource limits; exceeding any of them raises CapabilityError.

    Attributes:
      frontier_cap: Maximum number of nodes explored by the Hilbert basis completion and
        of coefficients held by one truncated expansion.
      split_budget: Maximum number of splitting steps of the partial fraction
        decomposition.
      refine_budget: Maximum number of refinement rounds when building partitions or
        normalizing torsion.
      bound: Default total-degree truncation bound.
      verify_bound: Bound used by the oracle cross-checks that accompany constructions.
      factor_limit: Numerators and denominators at or above this value are not factored.
      exact_verify: Whether constructions re-check their exact identities.
    """

    frontier_cap: int = 10**6
    split_budget: int = 10**4
    refine_budget: int = 64
    bound: int = 12
    verify_bound: int = 8
    factor_limit: int = 2**64
    exact_verify: bool = True

    @classmethod
    def from_env(cls, environ: Optional[dict[str, str]] = None) -> "Limits":
        """Builds limits from BEZIVIN_* environment variables over the defaults."""
        environ = os.environ if environ is None else environ
        overrides = {}
        for field, var in (
            ("frontier_cap", "BEZIVIN_FRONTIER_CAP"),
            ("split_budget", "BEZIVIN_SPLIT_BUDGET"),
            ("bound", "BEZIVIN_BOUND"),
        ):
            if var in environ:
                overrides[field] = int(environ[var])
        return cls(**overrides)


DEFAULT_LIMITS = Limits()


def resolve(limits: Optional[Limits]) -> Limits:
    return DEFAULT_LIMITS if limits is None else limits


def default_limits(func: Callable[P, T]) -> Callable[P, T]:
    """
    Passes DEFAULT_LIMITS to the keyword argument "limits" of the decorated function if
    it is None or missing.

    Args:
      func: A function accepting a keyword argument "limits".

    Returns:
      A decorated function that always receives a Limits instance.
    """

    @functools.wraps(func)
    def wrapper(*args: P.args, **kwargs: P.kwargs) -> T:
        if kwargs.get("limits") is None:
            kwargs["limits"] = DEFAULT_LIMITS
        return func(*args, **kwargs)

    return wrapper
