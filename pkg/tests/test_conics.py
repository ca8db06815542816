import itertools
from fractions import Fraction
from math import gcd, isqrt

import pytest
from hypothesis import assume, given, settings, strategies as st

from conic_census.arith import moebius_sq
from conic_census.conics import (
    DiagonalConic,
    norm_representable,
    rational_point_oracle,
    reduce,
    soluble_at,
    soluble_at_2_congruence,
    soluble_Q,
    soluble_real,
)
from conic_census.errors import CapacityError, DomainError
from conic_census.symbols import REAL, hilbert

coef = st.integers(-400, 400).filter(bool)


def test_reduce_examples():
    r = reduce((4, 9, -25))
    assert r.coefficients == (1, 1, -1) and r.square_parts == (2, 3, 5)
    r = reduce((6, 10, -15))
    assert r.m == (2, 3, 5) and r.n == (1, 1, 1)
    assert r.coefficients == (5, 3, -2)
    assert reduce((1, 1, -1)).coefficients == (1, 1, -1)


def test_reduce_content():
    r = reduce((6, 30, -42))
    assert r.content == 6
    assert r.coefficients == (1, 5, -7)
    r = reduce((6, 12, -18))  # kernels 6, 3, 2 after squares come out
    assert r.content == 1 and r.coefficients == (1, 2, -3)


def test_degenerate_rejected():
    with pytest.raises(DomainError):
        DiagonalConic(0, 1, 1)
    with pytest.raises(DomainError):
        soluble_Q((1, 0, -1))


def test_local_examples():
    assert not soluble_at((1, 1, 1), REAL)
    assert not soluble_at((1, 1, -3), 3)
    assert hilbert(-1, 3, 3) == -1
    for v in (REAL, 2, 3, 5, 7):
        assert soluble_at((1, 1, -2), v)


def test_global_examples():
    assert soluble_Q((1, 1, -2))
    assert not soluble_Q((1, 1, -3))
    assert soluble_Q((3, 5, -7)) == (rational_point_oracle((3, 5, -7)) is not None)


def test_oracle_examples():
    assert rational_point_oracle((1, 1, -2)) == (1, 1, 1)
    assert rational_point_oracle((1, 1, -3)) is None
    pt = rational_point_oracle((2, 3, -5))
    assert pt is not None and max(pt) <= 3
    with pytest.raises(CapacityError):
        rational_point_oracle((1009, 1013, -1019), budget=1000)
    with pytest.raises(DomainError):
        rational_point_oracle((2, 4, -3))


def test_oracle_point_is_a_solution():
    for a, b, c in [(1, 1, -2), (2, 3, -5), (5, 7, -3), (1, 2, -3), (3, 11, -2)]:
        pt = rational_point_oracle((a, b, c))
        if pt is not None:
            x, y, z = pt
            assert a * x * x + b * y * y + c * z * z == 0 and pt != (0, 0, 0)


def test_congruence_examples():
    assert soluble_at_2_congruence((1, 3, 5))
    assert not soluble_at_2_congruence((1, 1, 1))
    assert soluble_at_2_congruence((2, 1, 5))
    with pytest.raises(DomainError):
        soluble_at_2_congruence((4, 1, 1))


def test_congruence_route_mod16():
    checked = 0
    for r in itertools.product(range(1, 16), repeat=3):
        if (r[0] * r[1] * r[2]) % 4 == 0:
            continue
        checked += 1
        assert soluble_at_2_congruence(r) == (hilbert(-r[0] * r[1], -r[0] * r[2], 2) == 1), r
    assert checked == 1280


def test_holzer_agreement_small():
    for a in range(1, 200):
        for b in range(1, 200 // a + 1):
            for c in range(1, 200 // (a * b) + 1):
                if gcd(a, b) != 1 or gcd(a * b, c) != 1 or not moebius_sq(a * b * c):
                    continue
                for sb, sc in itertools.product((1, -1), repeat=2):
                    t = (a, sb * b, sc * c)
                    assert soluble_Q(t) == (rational_point_oracle(t) is not None), t


@settings(max_examples=200)
@given(coef, coef, coef, st.integers(-20, 20).filter(bool))
def test_scaling_invariance(t0, t1, t2, lam):
    assert soluble_Q((lam * t0, lam * t1, lam * t2)) == soluble_Q((t0, t1, t2))


@settings(max_examples=200)
@given(coef, coef, coef)
def test_permutation_invariance(t0, t1, t2):
    base = soluble_Q((t0, t1, t2))
    assert all(soluble_Q(p) == base for p in itertools.permutations((t0, t1, t2)))


@settings(max_examples=200)
@given(coef, coef, coef, st.integers(1, 30))
def test_square_scaling(t0, t1, t2, s):
    assert soluble_Q((t0 * s * s, t1, t2)) == soluble_Q((t0, t1, t2))


@settings(max_examples=200)
@given(coef, coef, coef)
def test_real_criterion(t0, t1, t2):
    same = (t0 > 0) == (t1 > 0) == (t2 > 0)
    assert soluble_real((t0, t1, t2)) == (not same)


@settings(max_examples=200)
@given(coef, coef, coef)
def test_reduced_model_is_squarefree_coprime(t0, t1, t2):
    r = reduce((t0, t1, t2))
    a, b, c = r.coefficients
    assert moebius_sq(abs(a * b * c))
    assert gcd(a, b) == gcd(a, c) == gcd(b, c) == 1
    for v in (REAL, 2, 3, 5, 7):
        assert soluble_at((t0, t1, t2), v) == soluble_at(r, v)


def test_norm_examples():
    assert norm_representable(5, -1)
    assert not norm_representable(3, -1)
    assert norm_representable((9, 2), -1)
    assert norm_representable(Fraction(9, 2), -1)
    assert norm_representable(7, 4)  # a square: everything is a norm
    with pytest.raises(DomainError):
        norm_representable(0, -1)


def _two_squares_search(t: Fraction, max_den: int = 50) -> bool:
    """x^2 + y^2 = t with x, y rationals of common denominator <= max_den."""
    for d in range(1, max_den + 1):
        target = t * d * d
        if target.denominator != 1:
            continue
        n = target.numerator
        for x in range(isqrt(n) + 1):
            y2 = n - x * x
            if isqrt(y2) ** 2 == y2:
                return True
    return False


def test_norm_two_squares_against_search():
    cases = [Fraction(p, q) for p in range(1, 26) for q in range(1, 21) if gcd(p, q) == 1]
    assert len(cases) >= 300
    for t in cases[:500]:
        assert norm_representable(t, -1) == _two_squares_search(t), t


@settings(max_examples=200)
@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_norm_two_squares_criterion(num, den):
    assume(gcd(num, den) == 1)
    from conic_census.arith import factor

    ok = all(e % 2 == 0 for p, e in factor(num * den) if p % 4 == 3)
    assert norm_representable((num, den), -1) == ok
    assert not norm_representable((-num, den), -1)
