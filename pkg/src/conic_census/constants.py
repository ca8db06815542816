"""Leading constants as regularised Euler products, plus the exact combinatorial factors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np
import sympy
from scipy.special import zeta

from .arith import prime_divisors, tau
from .densities import (
    REAL_CONIC_MEASURE,
    local_density_conic,
    local_density_conic_closed,
    local_density_conic_real,
    tamagawa_convert,
)
from .errors import DomainError
from .euler import DEFAULT_PRIME_BOUND, EulerProductSpec, EulerProductValue, evaluate
from .family import FamilyParams, Triple
from .symbols import REAL

PI = math.pi

# -- Selberg-Delange constants ----------------------------------------------


def t_p(p: int | float) -> float:
    """1 + sum_{k>=1} 1/((k+1) p^k) = p*log(p/(p-1))."""
    return -p * math.log1p(-1.0 / p)


def t_p_series(p: int, terms: int = 200) -> float:
    x = 1.0 / p
    return 1.0 + sum(x**k / (k + 1) for k in range(1, terms + 1))


def _log_t0_factor(p: np.ndarray) -> np.ndarray:
    tp = -p * np.log1p(-1 / p)
    return np.log(tp) + 0.5 * np.log1p(-1 / p)


def t0_spec(prime_bound: int = DEFAULT_PRIME_BOUND) -> EulerProductSpec:
    return EulerProductSpec("t0", _log_t0_factor, "(1-1/p)^(1/2)", prime_bound)


@lru_cache(maxsize=16)
def t0(prime_bound: int = DEFAULT_PRIME_BOUND) -> float:
    """pi^{-1/2} prod_p t_p (1 - 1/p)^{1/2}."""
    return evaluate(t0_spec(prime_bound)).value / math.sqrt(PI)


def selberg_constants(p: int, prime_bound: int = DEFAULT_PRIME_BOUND) -> tuple[float, float]:
    """(t_p, t0)."""
    if not sympy.isprime(p):
        raise DomainError(f"{p} is not prime")
    return t_p(p), t0(prime_bound)


# -- kappa, f(d), gamma(d), beta(b, m), c(b, m) ------------------------------


def _log_kappa_factor(p: np.ndarray) -> np.ndarray:
    return 1.5 * np.log1p(-1 / p) + np.log1p(1.5 / p)


def kappa_spec(prime_bound: int = DEFAULT_PRIME_BOUND) -> EulerProductSpec:
    return EulerProductSpec("kappa", _log_kappa_factor, "(1-1/p)^(3/2)", prime_bound, skip=(2,))


@lru_cache(maxsize=16)
def kappa_value(prime_bound: int = DEFAULT_PRIME_BOUND) -> EulerProductValue:
    return evaluate(kappa_spec(prime_bound))


def kappa(prime_bound: int = DEFAULT_PRIME_BOUND) -> float:
    """prod_{p odd} (1 - 1/p)^{3/2} (1 + 3/(2p))."""
    return kappa_value(prime_bound).value


def f_multiplicative(d: Triple) -> Fraction:
    """prod over odd p | d1 d2 d3 of (1 - #{i : p | d_i}/(2p + 3))."""
    if 0 in d:
        raise DomainError("d must be nonzero")
    out = Fraction(1)
    for p in prime_divisors(d[0] * d[1] * d[2]):
        if p == 2:
            continue
        k = sum(1 for x in d if x % p == 0)
        out *= 1 - Fraction(k, 2 * p + 3)
    return out


def gamma_d(d: Triple, prime_bound: int = DEFAULT_PRIME_BOUND) -> float:
    """prod_{p odd} (1 - 1/p)^{3/2} (1 + #{i : p not dividing d_i}/(2p)), evaluated as kappa * f(d)."""
    if any(x % 2 == 0 for x in d):
        raise DomainError(f"gamma_d needs odd entries, got {d}")
    return kappa(prime_bound) * float(f_multiplicative(d))


def c_bm(params: FamilyParams) -> int:
    if params.m_product % 2 == 0:
        return 2
    return 3 + sum(1 for g in params.pair_gcds if g % 2 == 1)


def beta_bm(params: FamilyParams, prime_bound: int = DEFAULT_PRIME_BOUND) -> float:
    """beta(b, m) through the factorisation kappa * f(d) with d the coprimality moduli."""
    return gamma_d(params.coprimality_moduli, prime_bound)


def beta_bm_direct(params: FamilyParams, prime_bound: int = DEFAULT_PRIME_BOUND) -> float:
    """beta(b, m) straight from its defining product over odd p, pair by pair."""
    M = params.m_product
    pair_moduli = [M * g for g in params.pair_gcds]
    special = sorted({p for x in pair_moduli for p in prime_divisors(x) if p != 2})
    sp = np.array(special, dtype=np.int64)
    counts = np.array([sum(1 for x in pair_moduli if x % p) for p in special], dtype=np.longdouble)

    def log_factor(p: np.ndarray) -> np.ndarray:
        k = np.full(p.shape, 3, dtype=np.longdouble)
        if sp.size:
            idx = np.searchsorted(sp, p.astype(np.int64))
            idx = np.minimum(idx, sp.size - 1)
            hit = sp[idx] == p.astype(np.int64)
            k = np.where(hit, counts[idx], k)
        return 1.5 * np.log1p(-1 / p) + np.log1p(k / (2 * p))

    spec = EulerProductSpec("beta", log_factor, "(1-1/p)^(3/2)", prime_bound, skip=(2,))
    return evaluate(spec).value


def predict_genguo(params: FamilyParams, prime_bound: int = DEFAULT_PRIME_BOUND) -> float:
    """Coefficient of prod X_i / (log X_i)^{1/2} in the generalised count."""
    return (
        (2 * PI) ** -1.5 * beta_bm(params, prime_bound) * c_bm(params) / (2 * tau(params.m_odd))
    )


def guo_constant(prime_bound: int = DEFAULT_PRIME_BOUND) -> float:
    """6 * coefficient for b = m = (1,1,1): all sign patterns of an equal-box count."""
    return 6 * predict_genguo(FamilyParams(), prime_bound)


# -- 2-adic and p-adic bookkeeping behind the conic constant -----------------

_PAIRS = ((0, 1), (0, 2), (1, 2))  # (i, j) index pairs for m12, m13, m23


def two_adic_gamma() -> dict[str, Fraction]:
    """Sum over 2-adic classes of b (beta_i) and m (mu_ij) of 4^{-|beta|-|mu|} c(2^beta, 2^mu).

    Each beta_i runs over {0} and {>= 1}; the latter has total weight sum 4^{-k} = 1/3.
    Returns the contribution per case plus the total under key "total".
    """
    cases = {"mu_one": Fraction(0), "beta_none": Fraction(0), "beta_one": Fraction(0), "beta_two": Fraction(0)}
    for big in product((False, True), repeat=3):
        if all(big):
            continue  # min beta_i = 0
        w_beta = Fraction(1, 3) ** sum(big)
        b = tuple(2 if x else 1 for x in big)
        for mu in ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)):
            m = tuple(2 if x else 1 for x in mu)
            # min(mu12, beta3) = min(mu13, beta2) = min(mu23, beta1) = 0
            if (mu[0] and big[2]) or (mu[1] and big[1]) or (mu[2] and big[0]):
                continue
            c = c_bm(FamilyParams(b=b, m=m))
            w = w_beta * c * Fraction(1, 4) ** sum(mu)
            if any(mu):
                cases["mu_one"] += w
            else:
                cases[("beta_none", "beta_one", "beta_two")[sum(big)]] += w
    cases["total"] = sum(cases.values(), Fraction(0))
    return cases


def kappa_prime_enumerated(p: int) -> Fraction:
    """Local factor at odd p of the (b, m) sum, divided by kappa's factor, by class enumeration."""
    if p == 2 or not sympy.isprime(p):
        raise DomainError(f"need an odd prime, got {p}")
    geo = Fraction(1, p * p - 1)  # sum_{k>=1} p^{-2k}
    total = Fraction(0)
    for big in product((False, True), repeat=3):
        if all(big):
            continue
        w_beta = geo ** sum(big)
        for mu in ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)):
            if (mu[0] and big[2]) or (mu[1] and big[1]) or (mu[2] and big[0]):
                continue
            M = p ** sum(mu)
            # gcd(b_j, b_k) is divisible by p iff both exponents are >= 1
            g = (p if big[1] and big[2] else 1, p if big[0] and big[2] else 1, p if big[0] and big[1] else 1)
            d = tuple(M * x for x in g)
            total += w_beta * Fraction(1, p ** (2 * sum(mu))) * f_multiplicative(d) / tau(M)
    return total


def kappa_prime_bracket(p: int) -> Fraction:
    """The same factor as the four-term closed expression."""
    P = Fraction(p)
    return (
        3 * (1 - 3 / (3 + 2 * P)) / (2 * P**2 * (1 - 1 / P**2) ** 2)
        + 1
        + 3 / (P**2 - 1)
        + 3 * (1 - 1 / (2 * P + 3)) / (P**2 - 1) ** 2
    )


def per_prime_factor_rational(p: int) -> Fraction:
    """(p^2+p+1)(2p^2+p+2)/(2(p^2-1)^2): the odd-p factor with (1-1/p)^{3/2} removed."""
    return Fraction((p * p + p + 1) * (2 * p * p + p + 2), 2 * (p * p - 1) ** 2)


# -- the conic constant, three ways ------------------------------------------


def _log_cp(p: np.ndarray) -> np.ndarray:
    # c_p = (1 + 1/p + 1/p^2) (p^2 + p/2 + 1) / ((p + 1)^2 (1 - 1/p)^{1/2})
    return np.log1p(1 / p + 1 / p**2) + np.log1p(-1.5 * p / (p + 1) ** 2) - 0.5 * np.log1p(-1 / p)


def _log_route2(p: np.ndarray) -> np.ndarray:
    # kappa factor times the four-term bracket
    q = p * p
    excess = (
        3 * (1 - 3 / (3 + 2 * p)) / (2 * q * (1 - 1 / q) ** 2)
        + 3 / (q - 1)
        + 3 * (1 - 1 / (2 * p + 3)) / (q - 1) ** 2
    )
    return _log_kappa_factor(p) + np.log1p(excess)


def _log_closed_route2(p: np.ndarray) -> np.ndarray:
    q = p * p
    return 1.5 * np.log1p(-1 / p) + np.log((q + p + 1) * (2 * q + p + 2) / (2 * (q - 1) ** 2))


#: primes at which the assembly route uses the enumerated density rather than the closed form
ASSEMBLY_ENUMERATED_PRIMES = (3, 5, 7, 11, 13)


def _assembly_spec(prime_bound: int) -> EulerProductSpec:
    small = np.array(ASSEMBLY_ENUMERATED_PRIMES, dtype=np.int64)
    small_logs = np.array(
        [math.log(local_density_conic(int(p), depth=2).value) for p in small], dtype=np.longdouble
    )

    def log_factor(p: np.ndarray) -> np.ndarray:
        # tau_p / (1 - 1/p)^{1/2} with tau_p = (1 + 1/p + 1/p^2)(2p^2 + p + 2)/(2(p + 1)^2)
        base = np.log1p(1 / p + 1 / p**2) + np.log1p(-3 * p / (2 * (p + 1) ** 2))
        pi = p.astype(np.int64)
        for s, ls in zip(small, small_logs):
            base = np.where(pi == s, ls, base)
        return base - 0.5 * np.log1p(-1 / p)

    return EulerProductSpec("tau_f", log_factor, "(1-1/p)^(1/2)", prime_bound, skip=(2,))


@dataclass(frozen=True)
class ConicConstants:
    route1: float  # 2 c_inf prod c_p / pi^{3/2}
    route2: float  # 3 (49/3) kappa prod kappa'_p / (2 pi)^{3/2}
    route2_closed: float  # same with the closed per-prime factor
    assembly: float  # Tamagawa volume, subordinate Brauer order, alpha, height dictionary
    all_triples: float  # constant for the count without the gcd condition
    all_triples_zeta: float  # zeta(3) * route1
    two_adic_gamma: Fraction
    prime_bound: int
    tail_bound: float

    @property
    def max_route_delta(self) -> float:
        vals = (self.route1, self.route2, self.route2_closed, self.assembly)
        return max(abs(a / b - 1) for a in vals for b in vals)


#: order of the subordinate Brauer group for the conic family
SUB_BRAUER_ORDER = 2
#: effective cone constant alpha of P^2
ALPHA_P2 = Fraction(1, 3)
#: anticanonical height on P^2 is the cube of the naive height
HEIGHT_EXPONENT = 3
#: number of sign classes t, -t identified by the projective count
SIGN_CLASSES = 2


def assembly_constant(tau_f: float) -> float:
    """Limit of the anticanonical-height count N(f, B^{1/3}) / (B (log B)^{-3/2})."""
    return float(ALPHA_P2) * SUB_BRAUER_ORDER * tau_f / PI**1.5 * HEIGHT_EXPONENT**1.5


def naive_from_anticanonical(k_anti: float) -> float:
    """Convert to the coefficient of B^3 (log B)^{-3/2} for signed triples with max |t_i| <= B."""
    return SIGN_CLASSES * k_anti / HEIGHT_EXPONENT**1.5


@lru_cache(maxsize=8)
def predict_conics(prime_bound: int = DEFAULT_PRIME_BOUND) -> ConicConstants:
    c_inf = 6
    c2 = (49 / 48) / math.sqrt(0.5)
    r1 = evaluate(EulerProductSpec("c_p", _log_cp, "(1-1/p)^(1/2)", prime_bound, skip=(2,)))
    route1 = 2 * c_inf * c2 * r1.value / PI**1.5

    gam = two_adic_gamma()["total"]
    r2 = evaluate(EulerProductSpec("kappa*kappa'", _log_route2, "(1-1/p)^(3/2)", prime_bound, skip=(2,)))
    route2 = 3 * float(gam) * r2.value / (2 * PI) ** 1.5
    r2c = evaluate(EulerProductSpec("closed", _log_closed_route2, "(1-1/p)^(3/2)", prime_bound, skip=(2,)))
    route2_closed = 3 * float(gam) * r2c.value / (2 * PI) ** 1.5

    tau_inf = float(local_density_conic_real().value)
    tau_2 = float(local_density_conic(2, depth=2).value) / math.sqrt(0.5)
    ra = evaluate(_assembly_spec(prime_bound))
    tau_f = tau_inf * tau_2 * ra.value
    assembly = naive_from_anticanonical(assembly_constant(tau_f))

    # count over all triples: theta_v are the unconverted Haar / Lebesgue measures
    theta_inf = float(REAL_CONIC_MEASURE)
    theta_2 = float(local_density_conic_closed(2).value / (1 + Fraction(1, 2) + Fraction(1, 4)))

    def log_theta(p: np.ndarray) -> np.ndarray:
        return np.log1p(-3 * p / (2 * (p + 1) ** 2)) - 1.5 * np.log1p(-1 / p)

    rt = evaluate(EulerProductSpec("theta", log_theta, "(1-1/p)^(3/2)", prime_bound, skip=(2,)))
    all_triples = 2 / PI**1.5 * theta_inf * theta_2 / 0.5**1.5 * rt.value

    return ConicConstants(
        route1=route1,
        route2=route2,
        route2_closed=route2_closed,
        assembly=assembly,
        all_triples=all_triples,
        all_triples_zeta=float(zeta(3)) * route1,
        two_adic_gamma=gam,
        prime_bound=prime_bound,
        tail_bound=max(r1.tail_bound, r2.tail_bound, ra.tail_bound, rt.tail_bound),
    )


# -- sums of two squares -----------------------------------------------------


def _log_two_squares_regular(p: np.ndarray) -> np.ndarray:
    chi = np.where(p.astype(np.int64) % 4 == 1, 1, -1).astype(np.longdouble)
    return np.log1p(-chi / p**2)


@dataclass(frozen=True)
class TwoSquaresConstant:
    value: float  # (3/(2 pi)) * kappa with kappa = L(chi_4, 1) * absolutely convergent product
    regular_product: float
    prime_bound: int
    tail_bound: float


@lru_cache(maxsize=8)
def predict_two_squares(prime_bound: int = DEFAULT_PRIME_BOUND) -> TwoSquaresConstant:
    """Leading constant of the coprime pair count, in B^2 / log B.

    The factors 1 + 1/p (p = 1 mod 4) and (1 + p^-2)/(1 + 1/p) (p = 3 mod 4) are
    multiplied by (1 - chi_4(p)/p), leaving 1 - chi_4(p)/p^2; the removed product is
    L(chi_4, 1) = pi/4.
    """
    val = evaluate(
        EulerProductSpec("two-squares", _log_two_squares_regular, "L(chi_4, 1) = pi/4", prime_bound, skip=(2,))
    )
    kap = (PI / 4) * val.value
    return TwoSquaresConstant(3 / (2 * PI) * kap, val.value, prime_bound, val.tail_bound)


def two_squares_naive_partials(bounds: list[int]) -> list[float]:
    """(3/(2 pi)) times the plainly truncated conditionally convergent product, per bound."""
    from .euler import partial_products

    def log_factor(p: np.ndarray) -> np.ndarray:
        one = p.astype(np.int64) % 4 == 1
        return np.where(one, np.log1p(1 / p), np.log1p(-(p - 1) / (p * (p + 1))))

    spec = EulerProductSpec("naive", log_factor, "", max(bounds), skip=(2,))
    return [3 / (2 * PI) * v for v in partial_products(spec, bounds)]


def local_density_odd_conic_float(p: int) -> float:
    return float(local_density_conic_closed(p).value)


def real_density_conic() -> Fraction:
    return tamagawa_convert(REAL_CONIC_MEASURE, 2, REAL)
