"""Truncated Euler products with tail estimates.

Factors are supplied as vectorised rules returning ``log(factor)`` over an array of
primes in ``np.longdouble``.  Summation runs over fixed-size prime blocks in
increasing order so the result does not depend on how it is scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import exp1

from .arith import build_sieve

LogFactorRule = Callable[[np.ndarray], np.ndarray]

DEFAULT_PRIME_BOUND = 10**6
_BLOCK = 1 << 16


@lru_cache(maxsize=8)
def primes_up_to(bound: int) -> np.ndarray:
    """All primes <= bound as a read-only int64 array."""
    if bound < 2:
        return np.zeros(0, dtype=np.int64)
    out = build_sieve(bound).primes
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class EulerProductSpec:
    """Recipe for prod_p factor(p) over primes p <= prime_bound not in ``skip``.

    ``log_factor`` must be regularised so that factor(p) = 1 + O(1/p^2); the
    ``regularization`` string records which convergence factor was used.
    """

    name: str
    log_factor: LogFactorRule
    regularization: str = ""
    prime_bound: int = DEFAULT_PRIME_BOUND
    skip: tuple[int, ...] = ()
    tail_window: int = 2000

    def with_bound(self, prime_bound: int) -> "EulerProductSpec":
        return EulerProductSpec(
            self.name, self.log_factor, self.regularization, prime_bound, self.skip, self.tail_window
        )


@dataclass(frozen=True)
class EulerProductValue:
    name: str
    value: float  # truncated product times the estimated tail
    truncated: float
    prime_bound: int
    tail_correction: float  # estimated log of the omitted tail
    tail_bound: float  # bound on |value/truncated - 1| from the sampled p^2 |log factor|
    p2_sup: float  # max over sampled primes of p^2 |log factor(p)|
    regularization: str = field(default="")

    @property
    def relative_tail(self) -> float:
        return math.expm1(self.tail_correction)


def _log_factors(spec: EulerProductSpec, primes: np.ndarray) -> np.ndarray:
    p = primes.astype(np.longdouble)
    out = np.asarray(spec.log_factor(p), dtype=np.longdouble)
    if spec.skip:
        out = np.where(np.isin(primes, spec.skip), np.longdouble(0), out)
    return out


def evaluate(spec: EulerProductSpec) -> EulerProductValue:
    """Evaluate a regularised Euler product up to ``spec.prime_bound`` with a tail estimate.

    The tail sum_{p > P} a/p^2 is estimated with a ~ p^2 log factor(p) averaged over the
    last ``tail_window`` primes, using sum_{p > P} p^-2 ~ E1(log P).
    """
    primes = primes_up_to(spec.prime_bound)
    total = np.longdouble(0)
    p2_sup = 0.0
    for start in range(0, primes.shape[0], _BLOCK):
        block = primes[start : start + _BLOCK]
        lf = _log_factors(spec, block)
        total += lf.sum(dtype=np.longdouble)
        big = block >= 100
        if big.any():
            scaled = np.abs(lf[big]) * block[big].astype(np.longdouble) ** 2
            p2_sup = max(p2_sup, float(scaled.max()))
    if primes.shape[0] == 0:
        return EulerProductValue(spec.name, 1.0, 1.0, spec.prime_bound, 0.0, 0.0, 0.0, spec.regularization)
    last = primes[-spec.tail_window :]
    lf_last = _log_factors(spec, last)
    a_inf = float(np.mean(lf_last * last.astype(np.longdouble) ** 2))
    logP = math.log(max(spec.prime_bound, 3))
    tail = a_inf * float(exp1(logP))
    sup = max(p2_sup, abs(a_inf))
    bound = math.expm1(sup / spec.prime_bound)
    truncated = float(np.exp(total))
    return EulerProductValue(
        name=spec.name,
        value=float(np.exp(total + np.longdouble(tail))),
        truncated=truncated,
        prime_bound=spec.prime_bound,
        tail_correction=tail,
        tail_bound=bound,
        p2_sup=p2_sup,
        regularization=spec.regularization,
    )


def partial_products(spec: EulerProductSpec, checkpoints: list[int]) -> list[float]:
    """Truncated products (no tail correction) at each checkpoint bound, in order."""
    primes = primes_up_to(max(checkpoints))
    cums = np.cumsum(_log_factors(spec, primes), dtype=np.longdouble)
    out = []
    for c in checkpoints:
        k = int(np.searchsorted(primes, c, side="right"))
        out.append(float(np.exp(cums[k - 1])) if k else 1.0)
    return out
