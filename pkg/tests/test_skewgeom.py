from fractions import Fraction

import pytest

from bezivin.errors import InputError
from bezivin.exactnum import GroupSpec, evaluate_certificate, group_member
from bezivin.leinartas import leinartas_decompose
from bezivin.oracle import (compare, expand_rational, from_source,
                            hadamard_product, hadamard_subinverse)
from bezivin.parser import from_str
from bezivin.polyexp import merge_all, term_to_pieces, to_partition
from bezivin.semilin import SimpleLinearSet, coset_refine
from bezivin.skewgeom import (AMBIGUOUS, BEZIVIN, FAIL, POLYA,
                              TRIVIALLY_AMBIGUOUS, UNAMBIGUOUS, Factor,
                              SkewGeometric, SkewGeomSum, certify_group,
                              classify_ambiguity, coefficient_at,
                              from_pieces, indicator_of, is_geometric,
                              restrict_to, subinverse_unambiguous,
                              to_rational, torsion_normalize)

GROUP_235 = GroupSpec([2, 3, 5])


def S(text):
    return SimpleLinearSet.parse(text)


def geom(c0, u0, *factors):
    return SkewGeometric(Fraction(c0), u0, tuple(Factor(Fraction(c), e) for c, e in factors))


def random_constant(rng):
    return evaluate_certificate(GROUP_235, [rng.randint(-1, 1) for _ in range(3)])


def random_support(rng):
    d = rng.randint(1, 3)
    axes = rng.sample(range(d), rng.randint(0, d))
    periods = []
    for axis in axes:
        period = [0] * d
        period[axis] = rng.randint(1, 2)
        periods.append(tuple(period))
    return SimpleLinearSet(tuple(rng.randint(0, 2) for _ in range(d)), tuple(periods))


def random_unambiguous(rng):
    support = random_support(rng)
    indices = [1] * support.rank
    if indices:
        indices[rng.randrange(support.rank)] = rng.randint(1, 3)
    summands = tuple(
        SkewGeometric(
            random_constant(rng),
            coset.offset,
            tuple(Factor(random_constant(rng), p) for p in coset.periods),
        )
        for coset in coset_refine(support, indices)
    )
    return SkewGeomSum(support.dim, summands)


def catalan_sum(expr):
    terms = [t for r in expr.terms for t in leinartas_decompose(r)]
    return from_pieces(to_partition(merge_all((term_to_pieces(t) for t in terms), expr.dim)))


def test_skew_geometric():
    f = geom(2, (0, 1), (3, (0, 1)), (5, (1, 1)))
    assert f.factors == (Factor(5, (1, 1)), Factor(3, (0, 1)))
    assert f.support == S("0,1 ; 1,1 ; 0,1")
    assert f.coefficient((2, 4)) == 2 * 25 * 3
    assert f.coefficient((2, 1)) == 0


@pytest.mark.parametrize(
    "c0,u0,factors",
    [
        (1, (0, 0), ((1, (1, 1)), (2, (2, 2)))),
        (1, (0, 0), ((0, (1, 0)),)),
        (1, (0, -1), ()),
    ],
)
def test_skew_geometric_rejects(c0, u0, factors):
    with pytest.raises(InputError):
        geom(c0, u0, *factors)


def test_indicator_of():
    f = indicator_of(S("0,0 ; 1,1"))
    assert to_rational(SkewGeomSum(2, (f,))) == list(from_str("1/(1-x1*x2)").terms)


def test_to_rational_matches_coefficients(rng):
    for _ in range(10):
        f = random_unambiguous(rng)
        rationals = to_rational(f)
        assert len(rationals) == len(f.summands)
        assert compare(expand_rational(rationals, 8, dim=f.dim), from_source(f, 8)) is None


def test_restrict_to():
    f = geom(1, (0,), (2, (1,)))
    g = restrict_to(f, S("1 ; 2"))
    assert g == geom(2, (1,), (4, (2,)))
    with pytest.raises(InputError):
        restrict_to(f, S("0,0"))


def test_restrict_to_matches_hadamard_with_indicator(rng):
    for _ in range(50):
        f = random_unambiguous(rng).summands[0]
        indices = [rng.randint(1, 3) for _ in range(f.support.rank)]
        cosets = coset_refine(f.support, indices)
        sub = cosets[rng.randrange(len(cosets))]
        restricted = restrict_to(f, sub)
        bound = 10
        expected = hadamard_product(
            from_source(f, bound), from_source(indicator_of(sub), bound)
        )
        assert compare(from_source(restricted, bound), expected) is None


@pytest.mark.parametrize(
    "summands,status,r",
    [
        ([geom(1, (0,), (2, (1,)))], UNAMBIGUOUS, 1),
        ([geom(1, (0,), (2, (2,))), geom(1, (1,), (3, (2,)))], UNAMBIGUOUS, 1),
        ([geom(1, (0,), (2, (1,))), geom(1, (0,), (3, (1,)))], TRIVIALLY_AMBIGUOUS, 2),
        ([geom(1, (0,), (2, (1,))), geom(1, (0,), (3, (2,)))], AMBIGUOUS, 2),
        ([geom(1, (0,), (2, (1,))), geom(0, (0,), (3, (1,)))], UNAMBIGUOUS, 1),
    ],
)
def test_classify_ambiguity(summands, status, r):
    report = classify_ambiguity(SkewGeomSum(1, tuple(summands)))
    assert report.status == status
    assert report.r == r


def test_classify_catalan(catalan):
    f = catalan_sum(catalan)
    assert len(f.summands) == 3
    report = classify_ambiguity(f)
    assert report.status == TRIVIALLY_AMBIGUOUS
    assert report.r == 3


def test_torsion_normalize():
    f = SkewGeomSum(1, (geom(1, (0,), (2, (1,))), geom(1, (0,), (-2, (1,)))))
    normalized = torsion_normalize(f)
    assert normalized.summands == (geom(2, (0,), (4, (2,))), geom(0, (1,), (4, (2,))))
    assert normalized.status == UNAMBIGUOUS
    assert compare(from_source(normalized, 10), from_source(f, 10)) is None


def test_torsion_normalize_keeps_non_torsion_sums(catalan):
    f = catalan_sum(catalan)
    normalized = torsion_normalize(f)
    assert normalized.summands == f.summands
    assert normalized.status == TRIVIALLY_AMBIGUOUS


@pytest.mark.parametrize(
    "summands,generators,kind,witness",
    [
        ([geom(1, (0, 0), (2, (1, 0)), (3, (0, 1)))], [2, 3], POLYA, None),
        ([geom(1, (0,), (5, (1,)))], [2, 3], FAIL, 5),
        ([geom(1, (0,), (2, (1,))), geom(-1, (0,), (3, (1,)))], [-1, 2, 3], BEZIVIN, None),
    ],
)
def test_certify_group(summands, generators, kind, witness):
    dim = summands[0].dim
    verdict = certify_group(SkewGeomSum(dim, tuple(summands)), GroupSpec(generators))
    assert verdict.kind == kind
    assert verdict.witness == witness


def test_certify_catalan(catalan):
    verdict = certify_group(catalan_sum(catalan), GroupSpec.parse("-1,2,3"), 3)
    assert verdict.kind == BEZIVIN
    assert verdict.r_eff == 3
    assert verdict.within_r


def test_polya_certification_is_sound(rng):
    for _ in range(200):
        f = random_unambiguous(rng)
        verdict = certify_group(f, GROUP_235)
        assert verdict.kind == POLYA
        series = expand_rational(to_rational(f), 12, dim=f.dim)
        for value in {c for _, c in series.items()}:
            assert group_member(value, GROUP_235) is not None

        index = rng.randrange(len(f.summands))
        target = f.summands[index]
        position = rng.randrange(len(target.factors) + 1)
        if position == 0:
            mutated = SkewGeometric(Fraction(7), target.u0, target.factors)
        else:
            factors = list(target.factors)
            factors[position - 1] = Factor(Fraction(7), factors[position - 1].e)
            mutated = SkewGeometric(target.c0, target.u0, tuple(factors))
        summands = f.summands[:index] + (mutated,) + f.summands[index + 1 :]
        broken = SkewGeomSum(f.dim, summands)
        verdict = certify_group(broken, GROUP_235)
        assert verdict.kind == FAIL
        assert verdict.witness == 7
        assert broken.summands[verdict.witness_summand] == mutated


def test_subinverse_unambiguous():
    f = SkewGeomSum(2, (geom(1, (0, 0), (6, (1, 1))),))
    g = subinverse_unambiguous(f)
    assert g.summands == (geom(1, (0, 0), (Fraction(1, 6), (1, 1))),)
    indicator = SkewGeomSum(1, (indicator_of(S("0 ; 1")),))
    assert subinverse_unambiguous(indicator).summands == indicator.summands


def test_subinverse_rejects_ambiguous():
    f = SkewGeomSum(1, (geom(1, (0,), (2, (1,))), geom(1, (0,), (3, (1,)))))
    with pytest.raises(InputError):
        subinverse_unambiguous(f)


def test_subinverse_round_trips(rng):
    for _ in range(50):
        f = random_unambiguous(rng)
        g = subinverse_unambiguous(f)
        assert subinverse_unambiguous(g).summands == f.summands
        assert compare(from_source(g, 10), hadamard_subinverse(from_source(f, 10))) is None


def test_is_geometric():
    assert is_geometric(geom(1, (0, 0), (2, (1, 0)), (3, (0, 1))))
    assert not is_geometric(geom(1, (0, 0), (2, (1, 1))))


def test_coefficient_at_zero_summand():
    assert coefficient_at(geom(0, (0,), (2, (1,))), (3,)) == 0
