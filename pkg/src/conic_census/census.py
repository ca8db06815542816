"""Counting loops for every family, split into slabs that run on a thread pool.

The compiled kernels release the GIL, so threads give real parallelism.  Each slab
returns an exact integer and slabs are summed in a fixed order, so results do not
depend on the number of workers.

Orbit bookkeeping for the diagonal conic count: a signed triple has a real point iff
its signs are not all equal.  Up to an overall sign, such a triple has exactly one
coefficient of the odd sign out, and it can sit in any of three positions, so
N(B) = 2 * 3 * #{(a, b, c) in [1, B]^3 : gcd = 1, a x^2 + b y^2 = c z^2 soluble}.
Inside that count (a, b) and (b, a) give the same conic, so only a <= b is visited
with weight 2 off the diagonal.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import gcd
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .arith import FactorSieve, build_sieve
from .conics import norm_representable
from .errors import CapacityError, DomainError
from .family import FamilyParams, Triple
from .normform import Form

#: permutations (3) times overall sign (2)
ORBIT_WEIGHT = 6


@dataclass(frozen=True)
class CountRecord:
    bounds: tuple[float, ...]
    raw_count: int
    normalization: float
    predicted: float

    @property
    def normalized(self) -> float:
        return self.raw_count * self.normalization

    @property
    def ratio(self) -> float:
        return self.normalized / self.predicted if self.predicted else math.nan


def _sieve_for(limit: int, sieve: FactorSieve | None) -> FactorSieve:
    if sieve is not None:
        if sieve.limit < limit:
            raise CapacityError(f"sieve limit {sieve.limit} below required {limit}")
        return sieve
    return build_sieve(max(limit, 2))


def _run_slabs(fn: Callable[[int, int], int], slabs: Sequence[tuple[int, int]], workers: int) -> int:
    if workers < 1:
        raise DomainError("workers must be >= 1")
    if workers == 1 or len(slabs) <= 1:
        return sum(fn(lo, hi) for lo, hi in slabs)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda s: fn(*s), slabs))
    return sum(parts)


def _balanced_slabs(lo: int, hi: int, weight: Callable[[int], float], pieces: int) -> list[tuple[int, int]]:
    """Split [lo, hi) into at most ``pieces`` contiguous slabs of similar total weight."""
    if hi <= lo:
        return []
    w = np.array([weight(i) for i in range(lo, hi)], dtype=float)
    cum = np.cumsum(w)
    target = cum[-1] / pieces
    cuts = [lo]
    for k in range(1, pieces):
        idx = int(np.searchsorted(cum, k * target)) + lo
        if idx > cuts[-1] and idx < hi:
            cuts.append(idx)
    cuts.append(hi)
    return list(zip(cuts[:-1], cuts[1:]))


def _pieces(workers: int) -> int:
    return max(1, 4 * workers)


def count_primitive_conics(B: int, sieve: FactorSieve | None = None, workers: int = 1) -> int:
    """N(B): signed primitive triples with max |t_i| <= B whose conic has a rational point."""
    if B < 1:
        return 0
    sv = _sieve_for(B, sieve)
    spf, sqf = sv.spf, sv.squarefree_kernel

    def slab(lo: int, hi: int) -> int:
        return int(_kernels.count_primitive_positive(lo, hi, B, spf, sqf))

    slabs = _balanced_slabs(1, B + 1, lambda a: B - a + 1, _pieces(workers))
    return ORBIT_WEIGHT * _run_slabs(slab, slabs, workers)


def kernel_weights(B: int, sieve: FactorSieve) -> tuple[np.ndarray, np.ndarray]:
    """Squarefree s <= B and #{t <= B : squarefree kernel of t is s} = floor(sqrt(B/s))."""
    sqf = sieve.squarefree_kernel[: B + 1]
    ks = np.flatnonzero(sqf == np.arange(B + 1))
    ks = ks[ks >= 1].astype(np.int64)
    w = np.array([math.isqrt(B // int(s)) for s in ks], dtype=np.int64)
    return ks, w


def count_all_conics(B: int, sieve: FactorSieve | None = None, workers: int = 1) -> int:
    """N0(B): as N(B) without the gcd condition, summed over squarefree kernels with multiplicity."""
    if B < 1:
        return 0
    sv = _sieve_for(B, sieve)
    ks, w = kernel_weights(B, sv)
    n = ks.shape[0]
    spf, sqf = sv.spf, sv.squarefree_kernel

    def slab(lo: int, hi: int) -> int:
        return int(_kernels.count_all_positive(lo, hi, B, ks, w, spf, sqf))

    slabs = _balanced_slabs(0, n, lambda i: n - i, _pieces(workers))
    return ORBIT_WEIGHT * _run_slabs(slab, slabs, workers)


def count_generalized(
    params: FamilyParams, X: Sequence[float], sieve: FactorSieve | None = None, workers: int = 1
) -> int:
    """Squarefree-product n in the box whose conic m23 n1 x^2 + m13 n2 y^2 = m12 n3 z^2 is soluble."""
    x1, x2, x3 = (int(math.floor(x)) for x in X)
    if min(x1, x2, x3) < 1:
        return 0
    m12, m13, m23 = params.m
    b1, b2, b3 = params.b
    limit = max(m23 * x1, m13 * x2, m12 * x3)
    sv = _sieve_for(limit, sieve)
    spf, sqf = sv.spf, sv.squarefree_kernel

    def slab(lo: int, hi: int) -> int:
        return int(_kernels.count_generalized_slab(lo, hi, x2, x3, b1, b2, b3, m12, m13, m23, spf, sqf))

    slabs = _balanced_slabs(1, x1 + 1, lambda _: 1.0, _pieces(workers))
    return _run_slabs(slab, slabs, workers)


def count_two_squares(B: int, sieve: FactorSieve | None = None, workers: int = 1) -> int:
    """#{(a, b) in [1, B]^2 coprime : a/b is a sum of two rational squares}.

    Relation to the count of rationals t = a/b by height: every nonzero such t has
    exactly one coprime representation with b > 0, and t must be positive, so this is
    the number of representable rationals of height <= B.  t = 0 is not counted.
    """
    if B < 1:
        return 0
    sv = _sieve_for(B, sieve)
    mask = _kernels.sum_two_squares_mask(sv.spf[: B + 1])
    vals = np.flatnonzero(mask).astype(np.int64)
    vals = vals[vals >= 1]
    return int(_kernels.count_coprime_pairs(vals))


def count_norm_form(form: Form | str, a: int, B: int, sieve: FactorSieve | None = None) -> int:
    """#{primitive x up to sign, max |x_i| <= B, g(x) != 0, g(x) = t0^2 - a t1^2 solvable over Q}."""
    if isinstance(form, str):
        form = Form.parse(form)
    if B < 1:
        return 0
    k = form.nvars
    if (2 * B + 1) ** k > 5 * 10**6:
        raise CapacityError(f"{(2 * B + 1) ** k} points exceed the norm-form enumeration budget")
    bound = sum(abs(c) for c, _ in form.terms) * B**form.degree
    if sieve is None and bound <= 10**7:
        sieve = build_sieve(max(bound, 2))
    cache: dict[int, bool] = {}
    total = 0
    for x in itertools.product(range(-B, B + 1), repeat=k):
        first = next((v for v in x if v != 0), 0)
        if first <= 0:
            continue
        g = 0
        for v in x:
            g = gcd(g, v)
        if g != 1:
            continue
        val = form(x)
        if val == 0:
            continue
        ok = cache.get(val)
        if ok is None:
            ok = norm_representable(val, a, sieve if sieve is not None and sieve.covers(val) else None)
            cache[val] = ok
        total += ok
    return total


def normalization_conics(B: float) -> float:
    return math.log(B) ** 1.5 / B**3


def normalization_two_squares(B: float) -> float:
    return math.log(B) / B**2


def normalization_generalized(X: Triple) -> float:
    out = 1.0
    for x in X:
        out *= math.sqrt(math.log(x)) / x
    return out


def normalization_norm_form(B: float, n: int) -> float:
    return math.sqrt(math.log(B)) / B ** (n + 1)
