import pytest

from bezivin.errors import CapabilityError
from bezivin.exactnum import GroupSpec
from bezivin.parser import from_str
from bezivin.pipeline import analyze
from bezivin.semilin import SimpleLinearSet
from bezivin.settings import Limits

STAGES = {"normalize_sum", "leinartas_decompose", "partition", "torsion_normalize"}


def test_analyze_catalan(catalan, limits):
    report = analyze(catalan, GroupSpec.parse("-1,2,3"), limits=limits)
    assert report.verdict.kind == "bezivin"
    assert report.verdict.l_max == 3
    assert report.certified
    assert report.exit_code == 0
    assert set(report.attestations) == STAGES
    assert all(report.attestations.values())
    assert len(report.terms) == 3
    assert all(t.independent_verified for t in report.terms)
    assert len(report.partition.pieces) == 1
    assert report.skew.status == "trivially_ambiguous"
    assert len(report.skew.summands) == 3
    assert report.group_verdict.kind == "bezivin"
    assert report.group_verdict.r_eff == 3


@pytest.mark.parametrize("r, within", [(3, True), (4, True), (2, False)])
def test_analyze_catalan_within_r(catalan, limits, r, within):
    report = analyze(catalan, GroupSpec.parse("-1,2,3"), r=r, limits=limits)
    assert report.verdict.within_r is within
    assert report.group_verdict.within_r is within


def test_analyze_catalan_outside_group(catalan, limits, group_23):
    report = analyze(catalan, group_23, limits=limits)
    assert report.verdict.kind == "constants_outside_group"
    assert report.verdict.witness_value == -1
    assert not report.certified
    assert report.exit_code == 1
    assert report.group_verdict.kind == "fail"
    assert report.group_verdict.witness == -1


def test_analyze_piecewise_example(piecewise_example, limits):
    report = analyze(piecewise_example, GroupSpec([2, 3, 5]), limits=limits)
    assert report.verdict.kind == "not_bezivin"
    assert report.verdict.witness_piece.set == SimpleLinearSet.parse("0,1 ; 1,1 ; 0,1")
    assert report.exit_code == 1
    assert report.partition.semantics == "partition"
    assert len(report.partition.pieces) == 3
    assert report.skew is None
    assert report.group_verdict is None
    assert all(report.attestations.values())
    assert "torsion_normalize" not in report.attestations


@pytest.mark.parametrize(
    "text, kind",
    [
        ("1/((1-2*x1)*(1-3*x2))", "polya"),
        ("1/(1-2*x1) + 1/(1+2*x1)", "polya"),
        ("1/(1-x1)^3", "not_bezivin"),
        ("1/((1-x1)*(1-x1*x2))", "polya"),
    ],
)
def test_analyze_kinds(text, kind, limits, group_23):
    report = analyze(from_str(text), group_23, limits=limits)
    assert report.verdict.kind == kind
    assert all(report.attestations.values())


def test_analyze_torsion_skew(limits, group_23):
    report = analyze(from_str("1/(1-2*x1) + 1/(1+2*x1)"), group_23, limits=limits)
    (summand,) = [s for s in report.skew.summands if s.c0]
    assert summand.c0 == 2
    assert summand.support == SimpleLinearSet.parse("0 ; 2")
    assert report.group_verdict.kind == "polya"


def test_analyze_default_limits(catalan):
    report = analyze(catalan, GroupSpec.parse("-1,2,3"))
    assert report.verdict.kind == "bezivin"


def test_analyze_split_budget():
    expr = from_str("1/((1-x1)*(1-x2)*(1-x1*x2))")
    with pytest.raises(CapabilityError):
        analyze(expr, GroupSpec([2]), limits=Limits(bound=8, verify_bound=6, split_budget=0))
