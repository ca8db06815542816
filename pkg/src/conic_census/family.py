"""Parameters (b, m) of the generalised conic family."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .arith import moebius_sq, odd_part
from .errors import DomainError

Triple = tuple[int, int, int]


def parse_triple(text: str | Triple) -> Triple:
    """'1,2,3' or (1, 2, 3) -> (1, 2, 3)."""
    if isinstance(text, str):
        parts = [s for s in text.replace(" ", "").split(",") if s]
        try:
            vals = tuple(int(s) for s in parts)
        except ValueError as exc:
            raise DomainError(f"not an integer triple: {text!r}") from exc
    else:
        vals = tuple(int(x) for x in text)
    if len(vals) != 3:
        raise DomainError(f"expected three integers, got {text!r}")
    return vals  # type: ignore[return-value]


@dataclass(frozen=True)
class FamilyParams:
    """b = (b1, b2, b3) and m = (m12, m13, m23).

    The counted equation is m23*n1*x1^2 + m13*n2*x2^2 = m12*n3*x3^2.
    """

    b: Triple = (1, 1, 1)
    m: Triple = (1, 1, 1)

    def __post_init__(self):
        b = parse_triple(self.b)
        m = parse_triple(self.m)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "m", m)
        if min(b + m) < 1:
            raise DomainError(f"b and m must be positive, got b={b}, m={m}")
        m12, m13, m23 = m
        if not moebius_sq(m12 * m13 * m23):
            raise DomainError(f"m12*m13*m23 = {m12 * m13 * m23} is not squarefree")
        if gcd(gcd(b[0], b[1]), b[2]) != 1:
            raise DomainError(f"gcd(b) != 1 for b={b}")
        if gcd(m12, b[2]) != 1 or gcd(m13, b[1]) != 1 or gcd(m23, b[0]) != 1:
            raise DomainError(f"m={m} shares a factor with the opposite b in b={b}")

    @property
    def m_product(self) -> int:
        return self.m[0] * self.m[1] * self.m[2]

    @property
    def m_odd(self) -> int:
        return odd_part(self.m_product)

    @property
    def pair_gcds(self) -> Triple:
        """(gcd(b2, b3), gcd(b1, b3), gcd(b1, b2)): the pair opposite each index."""
        b1, b2, b3 = self.b
        return (gcd(b2, b3), gcd(b1, b3), gcd(b1, b2))

    @property
    def coprimality_moduli(self) -> Triple:
        """d_i = odd part of m12*m13*m23*gcd(b_j, b_k); n_i must avoid their primes."""
        M = self.m_product
        return tuple(odd_part(M * g) for g in self.pair_gcds)  # type: ignore[return-value]
