import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conic_census.densities import (
    conic_haar_measure,
    local_density_conic,
    local_density_conic_closed,
    local_density_conic_real,
    local_density_two_squares,
    tamagawa_convert,
)
from conic_census.errors import DomainError
from conic_census.symbols import REAL, hilbert

PRIMES = (2, 3, 5, 7, 11, 13)


def test_known_values():
    assert local_density_conic(2).value == Fraction(49, 48)
    assert local_density_conic_closed(3).value == Fraction(299, 288)
    assert local_density_conic_real().value == 9


@pytest.mark.parametrize("p", PRIMES)
def test_conic_enumeration_equals_closed(p):
    assert local_density_conic(p).value == local_density_conic_closed(p).value


@pytest.mark.parametrize("depth", [0, 1, 2, 5])
def test_conic_enumeration_independent_of_depth(depth):
    for p in (2, 3, 5):
        assert local_density_conic(p, depth).value == local_density_conic_closed(p).value


def test_tail_mass_shrinks():
    tails = [local_density_conic(3, d).tail_mass for d in (1, 2, 3, 4)]
    assert all(a > b for a, b in zip(tails, tails[1:]))
    assert tails[-1] <= Fraction(3, 3**4)


def test_haar_measure_against_residue_count():
    # t mod 3^4 with no coordinate divisible by 3^4: solubility is decided, the rest has mass <= 3 * 3^-4
    p, k = 3, 4
    q = p**k
    good = 0
    for t in itertools.product(range(1, q), repeat=3):
        if any(x % q == 0 for x in t):
            continue
        good += hilbert(-t[0] * t[1], -t[0] * t[2], p) == 1
    approx = Fraction(good, q**3)
    mu, _ = conic_haar_measure(p)
    assert abs(mu - approx) <= Fraction(3, q)
    assert mu >= approx


def test_haar_measure_total_below_one():
    for p in PRIMES:
        mu, tail = conic_haar_measure(p)
        assert 0 < mu < 1 and 0 <= tail < mu


def test_two_squares_values():
    assert local_density_two_squares(2).value == Fraction(3, 4)
    assert local_density_two_squares(13).value == Fraction(14, 13)
    assert local_density_two_squares(7, route="enumeration").value == Fraction(25, 28)
    assert local_density_two_squares("inf").value == 2


@pytest.mark.parametrize("p", PRIMES)
def test_two_squares_routes_agree(p):
    assert local_density_two_squares(p, "enumeration").value == local_density_two_squares(p).value
    if p % 4 == 1:
        assert local_density_two_squares(p).value == 1 + Fraction(1, p)


def test_tamagawa_convert_examples():
    assert tamagawa_convert(Fraction(6), 2, REAL) == 9
    d = Fraction(2, 7)
    assert tamagawa_convert(d, 2, 5) == (1 + Fraction(1, 5) + Fraction(1, 25)) * d
    # full space Z_p^3: affine mass 1 and primitive mass 1 - p^-3 give the same projective volume
    for p in (2, 3, 5):
        full = tamagawa_convert(Fraction(1), 2, p)
        assert full == 1 + Fraction(1, p) + Fraction(1, p * p)
        assert tamagawa_convert(1 - Fraction(1, p**3), 2, p, primitive=True) == full
    with pytest.raises(DomainError):
        tamagawa_convert(Fraction(1), 2, REAL, primitive=True)
    with pytest.raises(DomainError):
        tamagawa_convert(Fraction(1), -1, 3)


@given(st.fractions(min_value=0, max_value=10), st.integers(0, 5))
def test_convert_is_linear(x, n):
    for v in (REAL, 3):
        assert tamagawa_convert(2 * x, n, v) == 2 * tamagawa_convert(x, n, v)


def test_bad_prime():
    with pytest.raises(DomainError):
        local_density_conic(9)
