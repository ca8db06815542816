"""Exact local densities of the conic and two-squares families.

Every finite-place density is an exact ``Fraction``.  The enumeration routes sum
the Haar measure over valuation classes: valuations up to the cap are listed one by
one, larger ones are grouped by parity and their geometric series summed in closed
form, so the result is exact for every depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Literal

import sympy

from .errors import DomainError
from .symbols import REAL, Place, PlaceLike, as_place, hilbert

Provenance = Literal["closed_form", "enumeration"]

#: Lebesgue measure of t in [-1, 1]^3 whose conic has a real point (6 of 8 sign octants)
REAL_CONIC_MEASURE = Fraction(6)
#: Lebesgue measure of (t0, t1) in [-1, 1]^2 with t0/t1 > 0
REAL_TWO_SQUARES_MEASURE = Fraction(2)


@dataclass(frozen=True)
class LocalDensity:
    place: Place
    value: Fraction
    provenance: Provenance
    tail_mass: Fraction = Fraction(0)  # Haar mass handled by closed-form tails

    def __post_init__(self):
        if self.value < 0:
            raise DomainError("densities are nonnegative")


def _check_prime(p: int) -> None:
    if not sympy.isprime(p):
        raise DomainError(f"{p} is not prime")


def tamagawa_convert(density: Fraction | float, n: int, place: PlaceLike, primitive: bool = False):
    """Convert an affine-cone measure on Q_v^{n+1} into the projective Tamagawa density.

    Real place: multiply by (n+1)/2 (cone measure inside [-1,1]^{n+1}).
    Finite p, full cone in Z_p^{n+1}: multiply by 1 + 1/p + ... + 1/p^n.
    Finite p, primitive vectors only: multiply by (1 - 1/p)^{-1}.
    """
    if n < 0:
        raise DomainError("projective dimension must be >= 0")
    v = as_place(place)
    exact = isinstance(density, (Fraction, int))
    one = Fraction(1) if exact else 1.0
    if v.is_real:
        if primitive:
            raise DomainError("primitivity has no meaning at the real place")
        return density * (one * (n + 1) / 2)
    p = v.p
    if primitive:
        return density / (one - one / p)
    return density * sum(one / p**k for k in range(n + 1))


# -- valuation classes -------------------------------------------------------


def _valuation_classes(p: int, depth: int) -> list[tuple[int, Fraction, bool]]:
    """(representative valuation, Haar mass of {v_p(t) in class} / unit mass, is_tail).

    Values 0..depth are explicit; v > depth is split into its two parity classes with
    mass sum_{v > depth, v = r mod 2} p^{-v} = p^{-r}/(1 - p^{-2}) where r is the first
    such v.  Multiply by the unit-class mass to get measures.
    """
    if depth < 0:
        raise DomainError("depth must be >= 0")
    q = Fraction(1, p)
    out = [(v, q**v, False) for v in range(depth + 1)]
    for r in (depth + 1, depth + 2):
        out.append((r, q**r / (1 - q * q), True))
    return out


def _unit_residues(p: int) -> tuple[int, list[int]]:
    """Modulus determining square classes of units, and the unit residues mod it."""
    if p == 2:
        return 8, [1, 3, 5, 7]
    return p, list(range(1, p))


@lru_cache(maxsize=None)
def _conic_unit_count(p: int, lam: tuple[int, int, int]) -> int:
    """#{unit residue triples c : (-p^{l0+l1} c0 c1, -p^{l0+l2} c0 c2)_p = 1}."""
    _, units = _unit_residues(p)
    place = Place(p)
    count = 0
    for c0, c1, c2 in product(units, repeat=3):
        a = -(p ** (lam[0] + lam[1])) * c0 * c1
        b = -(p ** (lam[0] + lam[2])) * c0 * c2
        if hilbert(a, b, place) == 1:
            count += 1
    return count


def conic_haar_measure(p: int, depth: int = 4) -> tuple[Fraction, Fraction]:
    """mu_p{t in Z_p^3 : sum t_i x_i^2 = 0 has a Q_p-point} and the mass carried by tails."""
    _check_prime(p)
    mod, units = _unit_residues(p)
    unit_mass = Fraction(1, mod)  # Haar mass of a unit residue class mod `mod`, at v = 0
    classes = _valuation_classes(p, depth)
    total = Fraction(0)
    tail = Fraction(0)
    for (v0, w0, t0), (v1, w1, t1), (v2, w2, t2) in product(classes, repeat=3):
        lam = (v0 & 1, v1 & 1, v2 & 1)
        mass = w0 * w1 * w2 * unit_mass**3 * _conic_unit_count(p, lam)
        total += mass
        if t0 or t1 or t2:
            tail += mass
    return total, tail


def local_density_conic(p: int, depth: int = 4) -> LocalDensity:
    """Projective Tamagawa density of soluble conics at p, by Haar enumeration."""
    mu, tail = conic_haar_measure(p, depth)
    value = tamagawa_convert(mu, 2, p)
    return LocalDensity(Place(p), value, "enumeration", tail_mass=tail)


def local_density_conic_closed(p: int) -> LocalDensity:
    _check_prime(p)
    if p == 2:
        value = Fraction(49, 48)
    else:
        value = (1 + Fraction(1, p) + Fraction(1, p * p)) * Fraction(2 * p * p + p + 2, 2 * (p + 1) ** 2)
    return LocalDensity(Place(p), value, "closed_form")


def local_density_conic_real() -> LocalDensity:
    return LocalDensity(REAL, tamagawa_convert(REAL_CONIC_MEASURE, 2, REAL), "closed_form")


def conic_density_unconverted(p: int) -> Fraction:
    """Haar measure of soluble t in Z_p^3, from the closed form (used by the all-triples count)."""
    return local_density_conic_closed(p).value / (1 + Fraction(1, p) + Fraction(1, p * p))


# -- sum of two squares ------------------------------------------------------


def _two_squares_enumerated(p: int, depth: int) -> tuple[Fraction, Fraction]:
    """(1 - 1/p)^{-1} mu_p{(t0, t1) primitive : t0/t1 is a norm from Q_p(i)}."""
    mod, units = _unit_residues(p)
    unit_mass = Fraction(1, mod)
    place = Place(p)
    good = {}
    for lam in range(2):
        good[lam] = sum(
            1 for c0, c1 in product(units, repeat=2) if hilbert(p**lam * c0 * c1, -1, place) == 1
        )
    total = Fraction(0)
    tail = Fraction(0)
    for (v0, w0, t0), (v1, w1, t1) in product(_valuation_classes(p, depth), repeat=2):
        if v0 > 0 and v1 > 0:
            continue
        mass = w0 * w1 * unit_mass**2 * good[(v0 + v1) & 1]
        total += mass
        if t0 or t1:
            tail += mass
    return tamagawa_convert(total, 1, p, primitive=True), tail


def local_density_two_squares(
    v: PlaceLike, route: Literal["closed", "enumeration"] = "closed", depth: int = 4
) -> LocalDensity:
    place = as_place(v)
    if place.is_real:
        return LocalDensity(REAL, tamagawa_convert(REAL_TWO_SQUARES_MEASURE, 1, REAL), "closed_form")
    p = place.p
    if route == "enumeration":
        value, tail = _two_squares_enumerated(p, depth)
        return LocalDensity(place, value, "enumeration", tail_mass=tail)
    if p == 2:
        value = Fraction(3, 4)
    elif p % 4 == 1:
        value = 1 + Fraction(1, p)
    else:
        value = 1 - Fraction(p - 1, p * (p + 1))
    return LocalDensity(place, value, "closed_form")
