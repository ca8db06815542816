"""Solubility of diagonal plane conics over the completions of Q and over Q itself."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .arith import FactorSieve, factor, prime_divisors, v_p
from .errors import CapacityError, DomainError
from .symbols import REAL, Place, PlaceLike, as_place, hilbert

#: largest number of (x, y) pairs the Holzer search will visit
HOLZER_BUDGET = 10**6


@dataclass(frozen=True)
class DiagonalConic:
    """t0*x0^2 + t1*x1^2 + t2*x2^2 = 0 with nonzero integer coefficients."""

    t0: int
    t1: int
    t2: int

    def __post_init__(self):
        if 0 in (self.t0, self.t1, self.t2):
            raise DomainError(f"degenerate conic {self.coefficients}")

    @property
    def coefficients(self) -> tuple[int, int, int]:
        return (self.t0, self.t1, self.t2)


@dataclass(frozen=True)
class ReducedConic:
    """Squarefree, pairwise coprime model a*Y0^2 + b*Y1^2 + c*Y2^2 = 0 of a diagonal conic.

    With t_i = sign_i * content * square_parts[i]^2 * kernel_i and
    kernel_0 = m12*m13*n1, kernel_1 = m12*m23*n2, kernel_2 = m13*m23*n3, the model is
    (a, b, c) = (sign_0*n1*m23, sign_1*n2*m13, sign_2*n3*m12).
    """

    a: int
    b: int
    c: int
    square_parts: tuple[int, int, int] = (1, 1, 1)
    m: tuple[int, int, int] = (1, 1, 1)  # (m12, m13, m23)
    n: tuple[int, int, int] = (1, 1, 1)
    content: int = 1

    @property
    def coefficients(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


ConicLike = DiagonalConic | ReducedConic | tuple[int, int, int]


def _coeffs(conic: ConicLike) -> tuple[int, int, int]:
    if isinstance(conic, (DiagonalConic, ReducedConic)):
        return conic.coefficients
    t = tuple(int(x) for x in conic)
    if len(t) != 3 or 0 in t:
        raise DomainError(f"need three nonzero coefficients, got {conic!r}")
    return t  # type: ignore[return-value]


def _square_split(n: int, sieve: FactorSieve | None) -> tuple[int, int]:
    """|n| = b^2 * c with c squarefree; returns (b, c)."""
    if sieve is not None and abs(n) > sieve.limit:
        sieve = None
    b = c = 1
    for p, e in factor(n, sieve):
        b *= p ** (e // 2)
        if e & 1:
            c *= p
    return b, c


def reduce(conic: ConicLike, sieve: FactorSieve | None = None) -> ReducedConic:
    """Absorb square factors and pairwise common factors, keeping every local solubility."""
    t = _coeffs(conic)
    signs = [1 if x > 0 else -1 for x in t]
    split = [_square_split(x, sieve) for x in t]
    sq = tuple(s[0] for s in split)
    c = [s[1] for s in split]
    g = gcd(gcd(c[0], c[1]), c[2])
    c = [x // g for x in c]
    m12, m13, m23 = gcd(c[0], c[1]), gcd(c[0], c[2]), gcd(c[1], c[2])
    n = (c[0] // (m12 * m13), c[1] // (m12 * m23), c[2] // (m13 * m23))
    return ReducedConic(
        a=signs[0] * n[0] * m23,
        b=signs[1] * n[1] * m13,
        c=signs[2] * n[2] * m12,
        square_parts=sq,
        m=(m12, m13, m23),
        n=n,
        content=g,
    )


def soluble_real(conic: ConicLike) -> bool:
    t = _coeffs(conic)
    return not (all(x > 0 for x in t) or all(x < 0 for x in t))


def soluble_at(conic: ConicLike, v: PlaceLike, sieve: FactorSieve | None = None) -> bool:
    """Does the conic have a point over the completion of Q at v?"""
    place = as_place(v)
    if place.is_real:
        return soluble_real(conic)
    if isinstance(conic, ReducedConic):
        a, b, c = conic.coefficients
    else:
        a, b, c = reduce(conic, sieve).coefficients
    return hilbert(-a * b, -a * c, place) == 1


def soluble_Q(conic: ConicLike, sieve: FactorSieve | None = None) -> bool:
    """Hasse-Minkowski: real solubility plus solubility at every prime dividing 2abc."""
    if not soluble_real(conic):
        return False
    red = conic if isinstance(conic, ReducedConic) else reduce(conic, sieve)
    a, b, c = red.coefficients
    primes = {2} | set(prime_divisors(a * b * c, sieve if sieve and sieve.covers(a * b * c) else None))
    return all(hilbert(-a * b, -a * c, Place(p)) == 1 for p in sorted(primes))


def rational_point_oracle(
    reduced: ReducedConic | tuple[int, int, int], budget: int = HOLZER_BUDGET
) -> tuple[int, int, int] | None:
    """Exhaustive search of the Holzer box for a nontrivial integer point.

    The coefficients must be squarefree and pairwise coprime.  By Holzer's theorem
    ``None`` means the conic has no rational point.
    """
    a, b, c = _coeffs(reduced)
    if gcd(a, b) != 1 or gcd(a, c) != 1 or gcd(b, c) != 1:
        raise DomainError(f"coefficients {a, b, c} not pairwise coprime")
    bounds = [isqrt(abs(b * c)), isqrt(abs(a * c)), isqrt(abs(a * b))]
    coeffs = [a, b, c]
    # solve for the coordinate with the widest range, loop over the other two
    k = max(range(3), key=lambda i: bounds[i])
    i, j = [x for x in range(3) if x != k]
    if (bounds[i] + 1) * (bounds[j] + 1) > budget:
        raise CapacityError(f"Holzer box for {a, b, c} exceeds budget {budget}")
    ci, cj, ck = coeffs[i], coeffs[j], coeffs[k]
    for xi in range(bounds[i] + 1):
        for xj in range(bounds[j] + 1):
            if xi == 0 and xj == 0:
                continue
            num = -(ci * xi * xi + cj * xj * xj)
            if num % ck:
                continue
            q = num // ck
            if q < 0:
                continue
            r = isqrt(q)
            if r * r == q and r <= bounds[k]:
                point = [0, 0, 0]
                point[i], point[j], point[k] = xi, xj, r
                return tuple(point)  # type: ignore[return-value]
    return None


def soluble_at_2_congruence(conic: ConicLike) -> bool:
    """2-adic solubility from the mod 4 / mod 8 congruence criterion.

    Only valid when v_2(r0*r1*r2) is 0 or 1.
    """
    r = _coeffs(conic)
    v = v_p(r[0] * r[1] * r[2], 2)
    if v == 0:
        return any((r[i] + r[j]) % 4 == 0 for i, j in ((0, 1), (0, 2), (1, 2)))
    if v == 1:
        k = next(idx for idx in range(3) if r[idx] % 2 == 0)
        i, j = [x for x in range(3) if x != k]
        return any((r[i] + r[j] + s * r[k]) % 8 == 0 for s in (0, 1))
    raise DomainError(f"v_2 of the coefficient product is {v}, criterion needs 0 or 1")


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def norm_representable(
    t: Fraction | int | tuple[int, int], a: int, sieve: FactorSieve | None = None
) -> bool:
    """Is the nonzero rational t of the form x^2 - a*y^2 with x, y rational?"""
    if isinstance(t, tuple):
        t = Fraction(t[0], t[1])
    t = Fraction(t)
    if t == 0 or a == 0:
        raise DomainError("norm_representable needs t != 0 and a != 0")
    if _is_square(a):
        return True
    x = t.numerator * t.denominator
    if hilbert(x, a, REAL) != 1:
        return False
    primes = {2} | set(prime_divisors(x, sieve)) | set(prime_divisors(a, sieve))
    return all(hilbert(x, a, p) == 1 for p in sorted(primes))
