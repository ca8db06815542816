"""Sieved factorization and the small multiplicative functions used everywhere else."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import isqrt

import numpy as np
import sympy

from . import _kernels
from .errors import CapacityError, DomainError

#: default ceiling for a single sieve allocation (entries); ~400 MB of int32 spf.
DEFAULT_SIEVE_BUDGET = 10**8

Factorization = list[tuple[int, int]]


@dataclass(frozen=True, eq=False)
class FactorSieve:
    """Smallest-prime-factor table for 0..limit.

    ``spf[0] = 0`` and ``spf[1] = 1`` are sentinels.  The object is immutable
    after construction and safe to share between threads.
    """

    limit: int
    spf: np.ndarray = field(repr=False)

    @cached_property
    def squarefree_kernel(self) -> np.ndarray:
        """kernel[n] = n with every square factor removed (int64)."""
        return _kernels.squarefree_kernel_array(self.spf)

    @cached_property
    def tau(self) -> np.ndarray:
        return _kernels.tau_array(self.spf)

    @cached_property
    def primes(self) -> np.ndarray:
        idx = np.arange(self.spf.shape[0])
        return idx[(self.spf == idx) & (idx >= 2)].astype(np.int64)

    def covers(self, n: int) -> bool:
        return abs(n) <= self.limit


def build_sieve(limit: int, budget: int = DEFAULT_SIEVE_BUDGET) -> FactorSieve:
    """Smallest-prime-factor sieve up to ``limit`` inclusive."""
    if limit < 2:
        raise DomainError(f"sieve limit must be >= 2, got {limit}")
    if limit > budget:
        raise CapacityError(f"sieve limit {limit} exceeds budget {budget}")
    spf = np.zeros(limit + 1, dtype=np.int32)
    spf[1] = 1
    for p in range(2, isqrt(limit) + 1):
        if spf[p]:
            continue
        spf[p] = p
        tail = spf[p * p :: p]
        tail[tail == 0] = p
    rest = np.flatnonzero(spf == 0)
    rest = rest[rest >= 2]
    spf[rest] = rest
    spf.setflags(write=False)
    return FactorSieve(limit=limit, spf=spf)


def factor(n: int, sieve: FactorSieve | None = None) -> Factorization:
    """Prime factorization of |n| as increasing (prime, exponent) pairs.

    Without a sieve, falls back to sympy.  ``factor(1) == []``.
    """
    if n == 0:
        raise DomainError("cannot factor 0")
    n = abs(n)
    if sieve is None:
        return sorted(sympy.factorint(n).items())
    if n > sieve.limit:
        raise CapacityError(f"|n| = {n} outside sieve range {sieve.limit}")
    spf = sieve.spf
    out: Factorization = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def prime_divisors(n: int, sieve: FactorSieve | None = None) -> list[int]:
    if sieve is not None and abs(n) > sieve.limit:
        sieve = None
    return [p for p, _ in factor(n, sieve)]


def v_p(n: int, p: int) -> int:
    """Exponent of the prime p in n != 0."""
    if n == 0:
        raise DomainError("v_p(0) is infinite")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def odd_part(n: int) -> int:
    """|n| with all factors of two removed."""
    if n == 0:
        raise DomainError("odd_part(0) undefined")
    n = abs(n)
    return n >> ((n & -n).bit_length() - 1)


def moebius_sq(n: int, sieve: FactorSieve | None = None) -> int:
    if n < 1:
        raise DomainError(f"moebius_sq needs n >= 1, got {n}")
    return int(all(e == 1 for _, e in factor(n, _usable(sieve, n))))


def tau(n: int, sieve: FactorSieve | None = None) -> int:
    """Number of positive divisors."""
    if n < 1:
        raise DomainError(f"tau needs n >= 1, got {n}")
    out = 1
    for _, e in factor(n, _usable(sieve, n)):
        out *= e + 1
    return out


def squarefree_kernel(n: int, sieve: FactorSieve | None = None) -> int:
    """Squarefree part of |n|: the unique squarefree c with |n| = b^2 c."""
    out = 1
    for p, e in factor(n, _usable(sieve, n)):
        if e & 1:
            out *= p
    return out


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1, by the binary reciprocity loop."""
    if n <= 0 or n % 2 == 0:
        raise DomainError(f"Jacobi symbol needs odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _usable(sieve: FactorSieve | None, n: int) -> FactorSieve | None:
    if sieve is not None and abs(n) <= sieve.limit:
        return sieve
    return None
