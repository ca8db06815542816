from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conic_census.conics import soluble_Q
from conic_census.detectors import (
    DetectorInput,
    count_generalized_reference,
    decomposition_check,
    detector_delta_sum,
    detector_jacobi_sum,
    detector_lhs,
    detector_matches_solubility,
    error_sum,
    main_sum,
    reciprocity_rearrangement_check,
    reciprocity_sides,
)
from conic_census.errors import DomainError
from conic_census.family import FamilyParams
from conic_census.verify import admissible_detector_triples, random_detector_triples, reciprocity_cases


def test_input_validation():
    for bad in [(1, 1, 1), (2, 1, 1), (3, 3, 1), (1, 9, 1), (0, 1, 3)]:
        with pytest.raises(DomainError):
            DetectorInput(*bad)
    assert DetectorInput(2, 3, 5).r == 15


def test_lhs_examples():
    assert detector_lhs(DetectorInput(1, 1, 3)) == 0
    assert detector_lhs(DetectorInput(1, 2, 3)) == 1
    assert detector_lhs(DetectorInput(3, 5, 7)) == int(soluble_Q((3, 5, -7)))


def test_jacobi_sum_small_cases():
    # r prime: every decomposition has delta = 1 or its complement = 1, so the sum is empty
    assert detector_jacobi_sum(DetectorInput(1, 1, 3)) == 0
    for p in (5, 13, 17, 29):
        assert detector_jacobi_sum(DetectorInput(1, 1, p)) == 0 == detector_delta_sum(DetectorInput(1, 1, p))
    inp = DetectorInput(3, 5, 1)
    assert detector_jacobi_sum(inp) == detector_delta_sum(inp)


def test_exhaustive_small_box():
    triples = list(admissible_detector_triples(600))
    assert len(triples) > 3000
    for t in triples:
        inp = DetectorInput(*t)
        assert detector_lhs(inp) == int(soluble_Q((t[0], t[1], -t[2])))
        assert detector_jacobi_sum(inp) == detector_delta_sum(inp)


def test_random_larger_triples():
    for t in random_detector_triples(300, seed=99):
        assert detector_matches_solubility(*t)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 400), st.integers(1, 400), st.integers(1, 400))
def test_detector_property(a, b, c):
    try:
        inp = DetectorInput(a, b, c)
    except DomainError:
        return
    assert detector_lhs(inp) in (0, 1)
    assert detector_lhs(inp) == int(soluble_Q((a, b, -c)))


FAMILIES = [
    FamilyParams((1, 1, 1), (1, 1, 1)),
    FamilyParams((1, 1, 1), (3, 1, 1)),
    FamilyParams((1, 1, 1), (2, 1, 1)),
    FamilyParams((2, 1, 1), (1, 1, 1)),
    FamilyParams((1, 1, 1), (3, 5, 1)),
]


@pytest.mark.parametrize("params", FAMILIES, ids=lambda f: f"b{f.b}_m{f.m}")
@pytest.mark.parametrize("X", [(6, 6, 6), (10, 8, 9)])
def test_main_error_decomposition(params, X):
    chk = decomposition_check(params, X)
    assert chk.holds, chk
    assert chk.residual == chk.correction
    assert isinstance(chk.main, Fraction) and isinstance(chk.error, Fraction)


def test_printed_sign_variant_breaks_decomposition():
    # the Legendre factor (-1 / d3 m12) written in the source breaks the identity once m12 > 1
    assert not decomposition_check(FamilyParams((1, 1, 1), (3, 1, 1)), (10, 8, 9), printed_sign=True).holds
    assert error_sum(FamilyParams(), (6, 6, 6)) == error_sum(FamilyParams(), (6, 6, 6), printed_sign=True)


def test_main_sum_positive():
    assert main_sum(FamilyParams(), (8, 8, 8)) > 0
    assert count_generalized_reference(FamilyParams(), (2, 2, 2)) == 4


def test_reciprocity_examples():
    one = (1, 1, 1)
    assert reciprocity_sides(one, one, one, one, (0, 0, 0), (0, 0, 0)) == (1, 1)
    assert reciprocity_rearrangement_check((3, 5, 7), (11, 13, 1), (17, 1, 19), (1, 23, 29))
    with pytest.raises(DomainError):
        reciprocity_rearrangement_check((2, 1, 1), one, one, one)
    with pytest.raises(DomainError):
        reciprocity_rearrangement_check((3, 3, 1), one, one, one)


def test_reciprocity_random():
    assert all(reciprocity_rearrangement_check(*case) for case in reciprocity_cases(1000, seed=5))
