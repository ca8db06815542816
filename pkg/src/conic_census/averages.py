"""Averages of 1/tau(n) in progressions, compared with their Selberg-Delange main terms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sympy import totient

from . import _kernels
from .arith import FactorSieve, build_sieve, prime_divisors
from .constants import gamma_d, t0, t_p
from .errors import CapacityError, DomainError
from .euler import DEFAULT_PRIME_BOUND
from .family import Triple


@dataclass(frozen=True)
class AverageCheck:
    x: float
    empirical: float
    main_term: float

    @property
    def ratio(self) -> float:
        return self.empirical / self.main_term

    @property
    def deviation(self) -> float:
        return abs(self.ratio - 1)


def _validate(q: int, a: int, d: int) -> None:
    if q not in (4, 8):
        raise DomainError(f"q must be 4 or 8, got {q}")
    if a % 2 == 0 or d % 2 == 0 or d == 0:
        raise DomainError(f"a and d must be odd, got a={a}, d={d}")


def _coprime_mask(n_max: int, d: int) -> np.ndarray:
    mask = np.ones(n_max + 1, dtype=bool)
    mask[0] = False
    for p in prime_divisors(abs(d)):
        mask[::p] = False
    return mask


def single_main_term(x: float, q: int, d: int, prime_bound: int = DEFAULT_PRIME_BOUND) -> float:
    """t0 / (phi(q) prod_{p | 2d} t_p) * x / sqrt(log x)."""
    denom = int(totient(q))
    for p in prime_divisors(2 * abs(d)):
        denom *= t_p(p)
    return t0(prime_bound) / denom * x / math.sqrt(math.log(x))


def selberg_delange_check(
    x: int, q: int, a: int, d: int, sieve: FactorSieve | None = None, prime_bound: int = DEFAULT_PRIME_BOUND
) -> AverageCheck:
    """sum_{n <= x, gcd(n, d) = 1, n = a mod q} 1/tau(n) and its main term."""
    _validate(q, a, d)
    x = int(x)
    if x < 2:
        raise DomainError("x must be >= 2")
    if sieve is None:
        sieve = build_sieve(x)
    elif sieve.limit < x:
        raise CapacityError(f"sieve limit {sieve.limit} below x = {x}")
    tau = sieve.tau[: x + 1]
    mask = _coprime_mask(x, d)
    prog = np.zeros(x + 1, dtype=bool)
    prog[a % q :: q] = True
    sel = mask & prog
    empirical = float(np.sum(1.0 / tau[sel].astype(np.float64)))
    return AverageCheck(x, empirical, single_main_term(x, q, d, prime_bound))


def triple_main_term(
    X: Triple, q: Triple, d: Triple, prime_bound: int = DEFAULT_PRIME_BOUND
) -> float:
    """gamma(d) / (2 pi)^{3/2} * prod X_i / (phi(q_i) sqrt(log X_i))."""
    out = gamma_d(d, prime_bound) / (2 * math.pi) ** 1.5
    for xi, qi in zip(X, q):
        out *= xi / (int(totient(qi)) * math.sqrt(math.log(xi)))
    return out


def triple_check(
    X: Triple,
    q: Triple,
    a: Triple,
    d: Triple,
    sieve: FactorSieve | None = None,
    prime_bound: int = DEFAULT_PRIME_BOUND,
) -> AverageCheck:
    """sum mu^2(n1 n2 n3) / (tau(n1) tau(n2) tau(n3)) over the box with per-index progression and coprimality."""
    for qi, ai, di in zip(q, a, d):
        _validate(qi, ai, di)
    x1, x2, x3 = (int(v) for v in X)
    top = max(x1, x2, x3)
    if sieve is None:
        sieve = build_sieve(max(top, 2))
    elif sieve.limit < top:
        raise CapacityError(f"sieve limit {sieve.limit} below {top}")
    emp = _kernels.triple_inverse_tau_sum(
        x1, x2, x3, *q, *(ai % qi for ai, qi in zip(a, q)), *(abs(di) for di in d),
        sieve.squarefree_kernel, sieve.tau,
    )
    return AverageCheck(float(math.prod(X) ** (1 / 3)), float(emp), triple_main_term(X, q, d, prime_bound))
