"""The analysis pipeline from a parsed expression to a certified verdict."""

import dataclasses
import logging
from typing import Optional

from . import leinartas, oracle, polyexp, skewgeom
from .exactnum import GroupSpec
from .errors import VerificationError
from .leinartas import DecompTerm
from .parser import RationalExpr
from .polyexp import PiecewisePolyExp, StructureVerdict
from .settings import Limits, default_limits
from .skewgeom import GroupVerdict, SkewGeomSum

logger = logging.getLogger(__name__)

CERTIFIED = (polyexp.POLYA, polyexp.BEZIVIN)


@dataclasses.dataclass
class Report:
    verdict: StructureVerdict
    terms: list[DecompTerm] = dataclasses.field(default_factory=list)
    partition: Optional[PiecewisePolyExp] = None
    skew: Optional[SkewGeomSum] = None
    group_verdict: Optional[GroupVerdict] = None
    attestations: dict[str, bool] = dataclasses.field(default_factory=dict)
    notes: list[str] = dataclasses.field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.verdict.kind in CERTIFIED

    @property
    def exit_code(self) -> int:
        return 0 if self.certified else 1


@default_limits
def analyze(
    expr: RationalExpr,
    group: GroupSpec,
    *,
    r: Optional[int] = None,
    limits: Optional[Limits] = None,
) -> Report:
    """Decomposes, classifies and certifies a sum of unit-product fractions.

    Each summand is gcd-normalized and decomposed on its own; the pieces of all summands
    are merged into a partition, which is classified against the group. Exponential
    partitions are also rewritten as skew-geometric sums, torsion normalized and
    certified. Every stage records whether its exact check passed.

    Raises:
      CapabilityError: If a limit is hit or no partition can be built.
      VerificationError: If an exact check fails.
    """
    bound = limits.bound
    attestations: dict[str, bool] = {}
    notes: list[str] = []
    expected = oracle.expand_rational(expr.terms, bound, dim=expr.dim)

    normalized = leinartas.normalize_sum(list(expr.terms), limits=limits)
    attestations["normalize_sum"] = (
        oracle.compare(oracle.expand_rational(normalized, bound), expected) is None
    )
    logger.info("Normalized input over %d blocks", len(normalized.blocks))

    terms: list[DecompTerm] = []
    for term in expr.terms:
        split, term_notes = leinartas.gcd_normalize_rational(term)
        notes.extend(term_notes)
        terms.extend(leinartas.leinartas_decompose(split, limits=limits))
    attestations["leinartas_decompose"] = leinartas.rational_identity(terms, list(expr.terms))
    logger.info("Decomposed into %d independent terms", len(terms))

    pile = polyexp.merge_all((polyexp.term_to_pieces(t) for t in terms), expr.dim)
    partition = polyexp.to_partition(pile, limits=limits)
    if partition.note:
        notes.append(partition.note)
    attestations["partition"] = (
        oracle.compare(oracle.from_source(partition, bound), expected) is None
    )
    verdict = polyexp.classify_structure(partition, group, r)
    logger.info("Structure verdict: %s", verdict.kind)

    skew = group_verdict = None
    if polyexp.is_exponential(partition):
        skew = skewgeom.torsion_normalize(skewgeom.from_pieces(partition), limits=limits)
        attestations["torsion_normalize"] = (
            oracle.compare(oracle.from_source(skew, bound), expected) is None
        )
        group_verdict = skewgeom.certify_group(skew, group, r, limits=limits)
        logger.info("Group verdict: %s (r=%d)", group_verdict.kind, group_verdict.r_eff)

    failed = [stage for stage, ok in attestations.items() if not ok]
    if failed:
        raise VerificationError(f"exact checks failed at: {', '.join(failed)}.")
    return Report(verdict, terms, partition, skew, group_verdict, attestations, notes)
