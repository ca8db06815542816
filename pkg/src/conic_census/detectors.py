"""Closed detector formulas for Q-solubility and the exact sums built from them.

Everything is exact: integer arithmetic for the indicator formulas and ``Fraction``
for the weighted sums M and E.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, prod

import sympy

from .arith import FactorSieve, jacobi, moebius_sq, odd_part, prime_divisors, tau
from .conics import soluble_Q
from .errors import DomainError
from .family import FamilyParams, Triple
from .symbols import Place, hilbert

_TWO = Place(2)


def _divisors(n: int) -> list[int]:
    return sorted(sympy.divisors(n))


@dataclass(frozen=True)
class DetectorInput:
    """Positive a, b, c with abc squarefree, pairwise coprime and divisible by an odd prime."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        a, b, c = self.a, self.b, self.c
        if min(a, b, c) < 1:
            raise DomainError(f"need positive a, b, c, got {(a, b, c)}")
        if gcd(a, b) != 1 or gcd(a, c) != 1 or gcd(b, c) != 1:
            raise DomainError(f"{(a, b, c)} not pairwise coprime")
        if not moebius_sq(a * b * c):
            raise DomainError(f"abc = {a * b * c} not squarefree")
        if odd_part(a * b * c) == 1:
            raise DomainError(f"abc = {a * b * c} has no odd prime factor")

    @property
    def r(self) -> int:
        return odd_part(self.a * self.b * self.c)


def _symbol_product(inp: DetectorInput, delta: int) -> int:
    s = 1
    for p in prime_divisors(delta):
        s *= hilbert(inp.a * inp.c, inp.b * inp.c, p)
    return s


def detector_delta_sum(inp: DetectorInput) -> int:
    """sum over delta | r, delta not in {1, r}, of prod_{p | delta} (ac, bc)_p."""
    r = inp.r
    return sum(_symbol_product(inp, d) for d in _divisors(r) if d not in (1, r))


def detector_lhs(inp: DetectorInput) -> int:
    """(1 + s)(1 + s + delta sum) / (2 tau(r)) with s = (ac, bc)_2; always 0 or 1."""
    s2 = hilbert(inp.a * inp.c, inp.b * inp.c, _TWO)
    num = (1 + s2) * (1 + s2 + detector_delta_sum(inp))
    den = 2 * tau(inp.r)
    if num % den:
        raise ArithmeticError(f"detector value {num}/{den} is not an integer for {inp}")
    return num // den


def detector_jacobi_sum(inp: DetectorInput) -> int:
    """Sum of (bc/d1)(ac/d2)(-ab/d3) over d_i * dt_i = odd parts of a, b, c, both products != 1."""
    a, b, c = inp.a, inp.b, inp.c
    ao, bo, co = odd_part(a), odd_part(b), odd_part(c)
    total = 0
    for d1, d2, d3 in product(_divisors(ao), _divisors(bo), _divisors(co)):
        if d1 * d2 * d3 == 1 or (ao // d1) * (bo // d2) * (co // d3) == 1:
            continue
        total += jacobi(b * c, d1) * jacobi(a * c, d2) * jacobi(-a * b, d3)
    return total


def detector_matches_solubility(a: int, b: int, c: int, sieve: FactorSieve | None = None) -> bool:
    inp = DetectorInput(a, b, c)
    return detector_lhs(inp) == int(soluble_Q((a, b, -c), sieve))


# -- the M / E decomposition of the generalised count -------------------------


def _admissible_n(params: FamilyParams, X: Triple):
    """All n in N^3 with n_i <= X_i, n1 n2 n3 squarefree, and the coprimality conditions."""
    M = params.m_product
    g = params.pair_gcds
    ranges = []
    for i in range(3):
        ranges.append(
            [n for n in range(1, int(X[i]) + 1) if moebius_sq(n) and gcd(n, M) == 1 and gcd(n, g[i]) == 1]
        )
    for n1, n2, n3 in product(*ranges):
        if gcd(n1, n2) == 1 and gcd(n1, n3) == 1 and gcd(n2, n3) == 1:
            yield n1, n2, n3


def _hilbert2(params: FamilyParams, n: Triple) -> int:
    m12, m13, m23 = params.m
    return hilbert(n[0] * n[2] * m12 * m23, n[1] * n[2] * m13 * m12, _TWO)


def _coefficients(params: FamilyParams, n: Triple) -> Triple:
    m12, m13, m23 = params.m
    return (n[0] * m23, n[1] * m13, n[2] * m12)


def count_generalized_reference(params: FamilyParams, X: Triple) -> int:
    """Slow count of the generalised family by Hilbert symbols, for cross-checks."""
    total = 0
    for n in _admissible_n(params, X):
        a, b, c = _coefficients(params, n)
        total += soluble_Q((a, b, -c))
    return total


def main_sum(params: FamilyParams, X: Triple) -> Fraction:
    """M(X): sum over admissible n with Hilbert symbol 1 at 2 of 1/tau(odd part of n1 n2 n3)."""
    total = Fraction(0)
    for n in _admissible_n(params, X):
        if _hilbert2(params, n) == 1:
            total += Fraction(1, tau(odd_part(n[0] * n[1] * n[2])))
    return total


def _odd_squarefree_upto(x: float, avoid: int) -> list[int]:
    return [n for n in range(1, int(x) + 1, 2) if moebius_sq(n) and gcd(n, avoid) == 1]


def error_sum(params: FamilyParams, X: Triple, printed_sign: bool = False) -> Fraction:
    """E(X) by literal summation over h, sigma, d, dt.

    The leading character is (-1 / d3 h12).  ``printed_sign=True`` uses the odd part of
    m12 instead of h12 there, which breaks the decomposition identity.
    """
    b1, b2, b3 = params.b
    m12, m13, m23 = params.m
    M = params.m_product
    mo = {k: odd_part(v) for k, v in zip((12, 13, 23), params.m)}
    g = params.pair_gcds  # gcd(b2,b3), gcd(b1,b3), gcd(b1,b2)
    total = Fraction(0)
    for sigma in ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)):
        if sum(sigma) and M % 2 == 0:
            continue
        if any(s and g[i] % 2 == 0 for i, s in enumerate(sigma)):
            continue
        s1, s2, s3 = (2**s for s in sigma)
        pools = [_odd_squarefree_upto(X[i] / 2 ** sigma[i], M * g[i]) for i in range(3)]
        for h12, h13, h23 in product(_divisors(mo[12]), _divisors(mo[13]), _divisors(mo[23])):
            ht12, ht13, ht23 = mo[12] // h12, mo[13] // h13, mo[23] // h23
            for n1, n2, n3 in product(*pools):
                if gcd(n1, n2) != 1 or gcd(n1, n3) != 1 or gcd(n2, n3) != 1:
                    continue
                # (n1 n3 m12 m23, n2 n3 m13 m12)_2 with n_i = 2^sigma_i * d_i * dt_i
                if hilbert(s1 * s3 * n1 * n3 * m12 * m23, s2 * s3 * n2 * n3 * m13 * m12, _TWO) != 1:
                    continue
                weight = Fraction(1, tau(n1 * n2 * n3))
                for d1, d2, d3 in product(_divisors(n1), _divisors(n2), _divisors(n3)):
                    dt1, dt2, dt3 = n1 // d1, n2 // d2, n3 // d3
                    if d1 * d2 * d3 * h12 * h13 * h23 == 1:
                        continue
                    if dt1 * dt2 * dt3 * ht12 * ht13 * ht23 == 1:
                        continue
                    lead = jacobi(-1, d3 * (mo[12] if printed_sign else h12))
                    j1 = jacobi(s2 * s3 * n2 * n3 * m12 * m13, d1 * h23)
                    j2 = jacobi(s1 * s3 * n1 * n3 * m12 * m23, d2 * h13)
                    j3 = jacobi(s1 * s2 * n1 * n2 * m13 * m23, d3 * h12)
                    total += weight * (lead * j1 * j2 * j3)
    return total


def theta_sum(params: FamilyParams, n: Triple) -> int:
    """Jacobi-symbol delta sum for the reduced conic of n, or 0 when it has no odd prime."""
    a, b, c = _coefficients(params, n)
    if odd_part(a * b * c) == 1:
        return 0
    return detector_jacobi_sum(DetectorInput(a, b, c))


@dataclass(frozen=True)
class DecompositionCheck:
    count: int
    tau_m: int
    main: Fraction
    error: Fraction
    correction: Fraction  # enumerated over n with n1 n2 n3 <= 2
    discarded: int  # number of such n

    @property
    def residual(self) -> Fraction:
        """tau(m_odd) N - 2M - E; equals ``correction`` exactly."""
        return self.tau_m * self.count - 2 * self.main - self.error

    @property
    def holds(self) -> bool:
        return self.residual == self.correction and abs(self.residual) <= self.discarded


def decomposition_check(params: FamilyParams, X: Triple, printed_sign: bool = False) -> DecompositionCheck:
    """Compare tau(m_odd) N against 2M + E over a small box.

    For n1 n2 n3 > 2 the detector identity makes the n-term of tau(m_odd) N equal the
    n-term of 2M + E.  The remaining n (n1 n2 n3 <= 2) are enumerated directly.
    """
    tm = tau(params.m_odd)
    N = count_generalized_reference(params, X)
    correction = Fraction(0)
    discarded = 0
    for n in _admissible_n(params, X):
        if n[0] * n[1] * n[2] > 2:
            continue
        discarded += 1
        a, b, c = _coefficients(params, n)
        ind = int(soluble_Q((a, b, -c)))
        if _hilbert2(params, n) == 1:
            term = Fraction(2 + theta_sum(params, n), tau(odd_part(n[0] * n[1] * n[2])))
        else:
            term = Fraction(0)
        correction += tm * ind - term
    return DecompositionCheck(N, tm, main_sum(params, X), error_sum(params, X, printed_sign), correction, discarded)


# -- quadratic reciprocity rearrangement ---------------------------------------


def _g_h(h: Triple) -> int:
    h12, h13, h23 = h
    return (h12 - 1) * (h13 - 1) + (h12 - 1) * (h23 - 1) + (h13 - 1) * (h23 - 1)


def _g_hd(h: Triple, d: Triple) -> int:
    h12, h13, h23 = h
    d1, d2, d3 = d
    return (
        (d1 - 1) * (d2 - 1)
        + (d1 - 1) * (d3 - 1)
        + (d2 - 1) * (d3 - 1)
        + (d1 - 1) * (h12 - 1)
        + (d1 - 1) * (h13 - 1)
        + (d2 - 1) * (h12 - 1)
        + (d2 - 1) * (h23 - 1)
        + (d3 - 1) * (h13 - 1)
        + (d3 - 1) * (h23 - 1)
    )


def reciprocity_sides(
    d: Triple, dt: Triple, h: Triple, ht: Triple, sigma: Triple, sigma_m: Triple
) -> tuple[int, int]:
    """Both sides of the rearranged Jacobi product in E.

    ``h``, ``ht`` and ``sigma_m`` are indexed (12, 13, 23); m_ij = 2^sigma_ij h_ij ht_ij.
    The left side is (-1 / d3 h12) times the three Jacobi symbols of the E summand.
    """
    vals = list(d) + list(dt) + list(h) + list(ht)
    if any(v < 1 or v % 2 == 0 for v in vals):
        raise DomainError("all d, dt, h, ht must be odd and positive")
    if any(s not in (0, 1) for s in tuple(sigma) + tuple(sigma_m)):
        raise DomainError("sigma entries must be 0 or 1")
    if not moebius_sq(prod(vals)):
        raise DomainError("d, dt, h, ht must be squarefree and pairwise coprime")
    d1, d2, d3 = d
    e1, e2, e3 = dt
    h12, h13, h23 = h
    k12, k13, k23 = ht
    s1, s2, s3 = sigma
    t12, t13, t23 = sigma_m
    m12, m13, m23 = 2**t12 * h12 * k12, 2**t13 * h13 * k13, 2**t23 * h23 * k23
    lhs = (
        jacobi(-1, d3 * h12)
        * jacobi(2 ** (s2 + s3) * d2 * e2 * d3 * e3 * m12 * m13, d1 * h23)
        * jacobi(2 ** (s1 + s3) * d1 * e1 * d3 * e3 * m12 * m23, d2 * h13)
        * jacobi(2 ** (s1 + s2) * d1 * e1 * d2 * e2 * m13 * m23, d3 * h12)
    )
    S = s1 + s2 + s3 + t12 + t13 + t23
    rhs = -1 if ((_g_h(h) + _g_hd(h, d)) // 4) % 2 else 1
    rhs *= jacobi(2, d1 * h23) ** (S - s1 - t23)
    rhs *= jacobi(2, d2 * h13) ** (S - s2 - t13)
    rhs *= jacobi(2, d3 * h12) ** (S - s3 - t12)
    rhs *= jacobi(e2 * e3 * k12 * k13, d1 * h23)
    rhs *= jacobi(e1 * e3 * k12 * k23, d2 * h13)
    rhs *= jacobi(-e1 * e2 * k23 * k13, d3 * h12)
    return lhs, rhs


def reciprocity_rearrangement_check(
    d: Triple, dt: Triple, h: Triple, ht: Triple, sigma: Triple = (0, 0, 0), sigma_m: Triple = (0, 0, 0)
) -> bool:
    lhs, rhs = reciprocity_sides(d, dt, h, ht, sigma, sigma_m)
    return lhs == rhs
