from fractions import Fraction
from math import gcd

import pytest
import sympy

from conic_census.arith import build_sieve, moebius_sq, tau
from conic_census.averages import selberg_delange_check, single_main_term, triple_check, triple_main_term
from conic_census.constants import t0, t_p
from conic_census.errors import CapacityError, DomainError


def test_single_sum_brute_force():
    x = 1000
    direct = sum(Fraction(1, tau(n)) for n in range(1, x + 1) if n % 4 == 1)
    res = selberg_delange_check(x, 4, 1, 1)
    assert res.empirical == pytest.approx(float(direct), rel=1e-13)
    assert float(direct) == pytest.approx(77.21924603174604, rel=1e-13)
    d = 15
    direct = sum(Fraction(1, tau(n)) for n in range(1, x + 1) if n % 8 == 3 and gcd(n, d) == 1)
    assert selberg_delange_check(x, 8, 3, d).empirical == pytest.approx(float(direct), rel=1e-13)


def test_main_term_shape():
    x = 10**5
    m = single_main_term(x, 4, 1)
    import math

    assert m == pytest.approx(t0() / (2 * t_p(2)) * x / math.sqrt(math.log(x)))
    # more prime factors in d shrink the main term by t_p > 1
    assert single_main_term(x, 4, 15) == pytest.approx(m / (t_p(3) * t_p(5)))
    assert single_main_term(x, 8, 1) == pytest.approx(m / 2)


def test_trend():
    s = build_sieve(10**6)
    for q, a, d in [(4, 1, 1), (8, 3, 1), (4, 1, 15)]:
        devs = [selberg_delange_check(x, q, a, d, s).deviation for x in (10**4, 10**5, 10**6)]
        assert devs[-1] < 0.05
        assert devs[2] <= devs[1]


def test_validation():
    with pytest.raises(DomainError):
        selberg_delange_check(100, 3, 1, 1)
    with pytest.raises(DomainError):
        selberg_delange_check(100, 4, 2, 1)
    with pytest.raises(DomainError):
        selberg_delange_check(100, 4, 1, 6)
    with pytest.raises(CapacityError):
        selberg_delange_check(1000, 4, 1, 1, build_sieve(100))


def test_triple_sum_brute_force():
    X, q, a, d = (20, 15, 18), (4, 8, 4), (1, 3, 3), (1, 5, 3)
    direct = Fraction(0)
    for n1 in range(1, X[0] + 1):
        for n2 in range(1, X[1] + 1):
            for n3 in range(1, X[2] + 1):
                n = (n1, n2, n3)
                if any(n[i] % q[i] != a[i] % q[i] or gcd(n[i], d[i]) != 1 for i in range(3)):
                    continue
                if not moebius_sq(n1 * n2 * n3):
                    continue
                direct += Fraction(1, tau(n1) * tau(n2) * tau(n3))
    assert triple_check(X, q, a, d).empirical == pytest.approx(float(direct), rel=1e-12)


def test_triple_main_term():
    import math

    from conic_census.constants import gamma_d

    X = (100, 200, 300)
    expected = gamma_d((1, 1, 1)) / (2 * math.pi) ** 1.5
    for x in X:
        expected *= x / (2 * math.sqrt(math.log(x)))
    assert triple_main_term(X, (4, 4, 4), (1, 1, 1)) == pytest.approx(expected)
    assert sympy.totient(8) == 4


def test_triple_ratio_reasonable():
    r = triple_check((200, 200, 200), (4, 4, 4), (1, 1, 1), (1, 1, 1)).ratio
    assert 0.7 < r < 1.3
