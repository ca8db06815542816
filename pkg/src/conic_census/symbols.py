"""Hilbert symbols of nonzero integers at every place of Q."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import sympy

from .arith import FactorSieve, jacobi, prime_divisors
from .errors import DomainError


@dataclass(frozen=True)
class Place:
    """A place of Q: ``p=None`` is the real place, otherwise the p-adic one."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not sympy.isprime(self.p):
            raise DomainError(f"{self.p} is not prime")

    @property
    def is_real(self) -> bool:
        return self.p is None

    def __str__(self) -> str:
        return "inf" if self.p is None else str(self.p)


REAL = Place()

PlaceLike = Place | int | float | str


def as_place(v: PlaceLike) -> Place:
    """Accept a Place, a prime, or one of ``inf``/``real``/``math.inf``."""
    if isinstance(v, Place):
        return v
    if isinstance(v, str):
        if v.lower() in ("inf", "real", "oo", "infinity"):
            return REAL
        return Place(int(v))
    if isinstance(v, float):
        if math.isinf(v):
            return REAL
        raise DomainError(f"not a place: {v!r}")
    return _finite_place(int(v))


@lru_cache(maxsize=4096)
def _finite_place(p: int) -> Place:
    return Place(p)


def _split(n: int, p: int) -> tuple[int, int]:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e, n


def _eps(u: int) -> int:
    return 0 if u % 4 == 1 else 1


def _omega(u: int) -> int:
    return 0 if u % 8 in (1, 7) else 1


def hilbert(a: int, b: int, v: PlaceLike) -> int:
    """(a, b)_v for nonzero integers a, b."""
    if a == 0 or b == 0:
        raise DomainError("Hilbert symbol needs nonzero arguments")
    place = as_place(v)
    if place.is_real:
        return -1 if (a < 0 and b < 0) else 1
    p = place.p
    alpha, u = _split(a, p)
    beta, w = _split(b, p)
    if p == 2:
        e = _eps(u) * _eps(w) + alpha * _omega(w) + beta * _omega(u)
        return -1 if e & 1 else 1
    s = -1 if (alpha * beta * ((p - 1) // 2)) & 1 else 1
    if beta & 1:
        s *= jacobi(u, p)
    if alpha & 1:
        s *= jacobi(w, p)
    return s


def relevant_places(a: int, b: int, sieve: FactorSieve | None = None) -> list[Place]:
    """Real place plus every prime dividing 2ab: the only places where (a, b)_v can be -1."""
    primes = set(prime_divisors(a, sieve)) | set(prime_divisors(b, sieve)) | {2}
    return [REAL] + [_finite_place(p) for p in sorted(primes)]


def hilbert_product_check(a: int, b: int, sieve: FactorSieve | None = None) -> bool:
    """True iff the product of (a, b)_v over all places is 1."""
    prod = 1
    for v in relevant_places(a, b, sieve):
        prod *= hilbert(a, b, v)
    return prod == 1
