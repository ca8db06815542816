"""Invariant suites shared by the test-suite and ``conic-census verify``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Iterator

import numpy as np

from .arith import build_sieve, moebius_sq, odd_part, v_p
from .conics import rational_point_oracle, soluble_at_2_congruence, soluble_Q
from .detectors import (
    DetectorInput,
    decomposition_check,
    detector_delta_sum,
    detector_jacobi_sum,
    detector_lhs,
    reciprocity_rearrangement_check,
)
from .errors import DomainError
from .family import FamilyParams
from .symbols import Place, hilbert, hilbert_product_check


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    checked: int = 0
    failures: int = 0
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"{status} {self.suite}.{self.name} checked={self.checked} failures={self.failures}"
        return f"{out} {self.detail}" if self.detail else out


def _tally(suite: str, name: str, cases, predicate, detail: str = "") -> CheckResult:
    n = bad = 0
    first = None
    for case in cases:
        n += 1
        if not predicate(case):
            bad += 1
            first = first or case
    if first is not None:
        detail = f"{detail} first_failure={first}".strip()
    return CheckResult(suite, name, bad == 0, n, bad, detail)


# -- case generators -----------------------------------------------------------


def admissible_detector_triples(limit: int) -> Iterator[tuple[int, int, int]]:
    """Positive (a, b, c), abc <= limit, abc squarefree, pairwise coprime, with an odd prime factor."""
    for a in range(1, limit + 1):
        if not moebius_sq(a):
            continue
        for b in range(1, limit // a + 1):
            if gcd(a, b) != 1 or not moebius_sq(a * b):
                continue
            for c in range(1, limit // (a * b) + 1):
                abc = a * b * c
                if gcd(a * b, c) == 1 and moebius_sq(abc) and odd_part(abc) > 1:
                    yield (a, b, c)


def random_detector_triples(count: int, seed: int = 2024, top: int = 10**4) -> Iterator[tuple[int, int, int]]:
    rng = np.random.default_rng(seed)
    made = 0
    while made < count:
        a, b, c = (int(x) for x in rng.integers(1, top, size=3))
        abc = a * b * c
        if abc <= 3000 or gcd(a, b) != 1 or gcd(a, c) != 1 or gcd(b, c) != 1:
            continue
        if not moebius_sq(abc) or odd_part(abc) == 1:
            continue
        made += 1
        yield (a, b, c)


def reduced_conics(limit: int) -> Iterator[tuple[int, int, int]]:
    """Signed squarefree pairwise coprime (a, b, c) with |abc| <= limit, up to an overall sign."""
    for a in range(1, limit + 1):
        for b in range(1, limit // a + 1):
            if gcd(a, b) != 1:
                continue
            for c in range(1, limit // (a * b) + 1):
                if gcd(a * b, c) != 1 or not moebius_sq(a * b * c):
                    continue
                for sb, sc in itertools.product((1, -1), repeat=2):
                    yield (a, sb * b, sc * c)


def mod16_triples() -> Iterator[tuple[int, int, int]]:
    """Residue representatives r in [1, 15]^3 with v_2(r0 r1 r2) in {0, 1}."""
    for r in itertools.product(range(1, 16), repeat=3):
        if v_p(r[0] * r[1] * r[2], 2) <= 1:
            yield r


def reciprocity_cases(count: int, seed: int = 11) -> Iterator[tuple]:
    """Random admissible (d, dt, h, ht, sigma, sigma_m): small odd primes dealt into twelve slots."""
    rng = np.random.default_rng(seed)
    primes = (3, 5, 7, 11, 13, 17, 19)
    for _ in range(count):
        slots = [1] * 12
        for p in primes:
            k = int(rng.integers(0, 16))
            if k < 12:
                slots[k] *= p
        bits = [int(x) for x in rng.integers(0, 2, size=6)]
        yield (
            tuple(slots[0:3]), tuple(slots[3:6]), tuple(slots[6:9]), tuple(slots[9:12]),
            tuple(bits[:3]), tuple(bits[3:]),
        )


# -- suites ----------------------------------------------------------------------


def suite_hilbert(pairs: int = 10**5, bound: int = 10**6, seed: int = 7) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    sieve = build_sieve(bound)
    a = rng.integers(1, bound + 1, size=pairs) * rng.choice((-1, 1), size=pairs)
    b = rng.integers(1, bound + 1, size=pairs) * rng.choice((-1, 1), size=pairs)
    out = [
        _tally(
            "hilbert", "product_formula", zip(a.tolist(), b.tolist()),
            lambda ab: hilbert_product_check(ab[0], ab[1], sieve), f"bound={bound}",
        )
    ]
    small = [x for x in range(-60, 61) if x]
    places = [Place(), Place(2), Place(3), Place(5), Place(7)]

    def symmetric(ab):
        return all(hilbert(ab[0], ab[1], v) == hilbert(ab[1], ab[0], v) for v in places)

    def bilinear(abc):
        x, y, z = abc
        return all(hilbert(x * y, z, v) == hilbert(x, z, v) * hilbert(y, z, v) for v in places)

    out.append(_tally("hilbert", "symmetry", itertools.product(small, repeat=2), symmetric))
    trip = [x for x in range(-12, 13) if x]
    out.append(_tally("hilbert", "bilinearity", itertools.product(trip, repeat=3), bilinear))
    out.append(
        _tally(
            "hilbert", "congruence_route_mod16", mod16_triples(),
            lambda r: soluble_at_2_congruence(r) == (hilbert(-r[0] * r[1], -r[0] * r[2], 2) == 1),
        )
    )
    return out


def suite_detectors(limit: int = 3000, random_count: int = 10**4, holzer_limit: int = 2000) -> list[CheckResult]:
    sieve = build_sieve(max(limit, holzer_limit, 10**4))
    triples = list(admissible_detector_triples(limit))

    def indicator_agrees(t):
        inp = DetectorInput(*t)
        return detector_lhs(inp) == int(soluble_Q((t[0], t[1], -t[2]), sieve))

    def jacobi_identity(t):
        inp = DetectorInput(*t)
        return detector_delta_sum(inp) == detector_jacobi_sum(inp)

    out = [
        _tally("detectors", "indicator_exhaustive", triples, indicator_agrees, f"abc<={limit}"),
        _tally("detectors", "jacobi_identity", triples, jacobi_identity, f"abc<={limit}"),
        _tally("detectors", "indicator_random", random_detector_triples(random_count), indicator_agrees),
    ]
    out.append(
        _tally(
            "detectors", "holzer_oracle", reduced_conics(holzer_limit),
            lambda t: soluble_Q(t, sieve) == (rational_point_oracle(t) is not None), f"|abc|<={holzer_limit}",
        )
    )
    families = [
        FamilyParams((1, 1, 1), (1, 1, 1)),
        FamilyParams((1, 1, 1), (3, 1, 1)),
        FamilyParams((1, 1, 1), (2, 1, 1)),
        FamilyParams((2, 1, 1), (1, 1, 1)),
        FamilyParams((1, 1, 1), (3, 5, 1)),
    ]
    cases = [(f, X) for f in families for X in ((6, 6, 6), (10, 8, 9))]
    out.append(_tally("detectors", "main_error_decomposition", cases, lambda fx: decomposition_check(*fx).holds))

    def recip(case):
        return reciprocity_rearrangement_check(*case)

    out.append(_tally("detectors", "reciprocity_rearrangement", reciprocity_cases(2000), recip))
    return out


def suite_densities(primes: tuple[int, ...] = (2, 3, 5, 7, 11, 13)) -> list[CheckResult]:
    from .densities import local_density_conic, local_density_conic_closed, local_density_two_squares

    out = []
    for p in primes:
        enum = local_density_conic(p).value
        closed = local_density_conic_closed(p).value
        detail = f"p={p} enumeration={enum} closed={closed}"
        out.append(CheckResult("densities", f"conic_p{p}", enum == closed, 1, int(enum != closed), detail))
    for p in primes:
        enum = local_density_two_squares(p, route="enumeration").value
        closed = local_density_two_squares(p, route="closed").value
        detail = f"p={p} enumeration={enum} closed={closed}"
        out.append(CheckResult("densities", f"two_squares_p{p}", enum == closed, 1, int(enum != closed), detail))
    d2 = local_density_conic(2).value
    out.append(CheckResult("densities", "conic_p2_is_49/48", d2 == Fraction(49, 48), 1, int(d2 != Fraction(49, 48)), f"value={d2}"))
    return out


def suite_assembly(prime_bound: int = 10**6, tol: float = 1e-6) -> list[CheckResult]:
    from .constants import (
        kappa_prime_bracket,
        kappa_prime_enumerated,
        per_prime_factor_rational,
        predict_conics,
        two_adic_gamma,
    )
    from .euler import primes_up_to

    c = predict_conics(prime_bound)
    delta12 = abs(c.route1 / c.route2 - 1)
    deltaA = max(abs(c.assembly / c.route1 - 1), abs(c.assembly / c.route2 - 1))
    out = [
        CheckResult("assembly", "dual_route", delta12 <= tol, 1, int(delta12 > tol),
                    f"route1={c.route1:.12g} route2={c.route2:.12g} delta={delta12:.3g}"),
        CheckResult("assembly", "tamagawa_assembly", deltaA <= tol, 1, int(deltaA > tol),
                    f"assembly={c.assembly:.12g} delta={deltaA:.3g}"),
    ]
    g = two_adic_gamma()
    expected = {"mu_one": Fraction(8, 3), "beta_none": Fraction(6), "beta_one": Fraction(6), "beta_two": Fraction(5, 3)}
    ok = all(g[k] == v for k, v in expected.items()) and g["total"] == Fraction(49, 3)
    out.append(CheckResult("assembly", "two_adic_49/3", ok, 5, int(not ok), f"total={g['total']}"))
    small = [int(p) for p in primes_up_to(50) if p > 2]
    out.append(
        _tally(
            "assembly", "kappa_prime_bracket", small,
            lambda p: kappa_prime_enumerated(p) == kappa_prime_bracket(p)
            and (1 + Fraction(3, 2 * p)) * kappa_prime_bracket(p) == per_prime_factor_rational(p),
        )
    )
    return out


def suite_selberg(
    xs: tuple[int, ...] = (10**5, 10**6, 10**7),
    progressions: tuple[tuple[int, int, int], ...] = ((4, 1, 1), (8, 3, 1), (4, 1, 15)),
    tol: float = 0.35,
) -> list[CheckResult]:
    from .averages import selberg_delange_check

    sieve = build_sieve(max(xs))
    out = []
    for q, a, d in progressions:
        devs = [selberg_delange_check(x, q, a, d, sieve).deviation for x in xs]
        ok = all(devs[i + 1] <= devs[i] for i in range(len(devs) - 1)) and devs[-1] <= tol
        detail = "deviations=" + ",".join(f"{v:.4g}" for v in devs)
        out.append(CheckResult("selberg", f"q{q}_a{a}_d{d}", ok, len(xs), int(not ok), detail))
    return out


SUITES: dict[str, Callable[..., list[CheckResult]]] = {
    "hilbert": suite_hilbert,
    "detectors": suite_detectors,
    "densities": suite_densities,
    "assembly": suite_assembly,
    "selberg": suite_selberg,
}


def run_suite(name: str, **kwargs) -> list[CheckResult]:
    try:
        fn = SUITES[name]
    except KeyError:
        raise DomainError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    return fn(**kwargs)
