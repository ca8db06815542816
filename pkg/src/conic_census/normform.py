"""Which values of a homogeneous form are norms from Q(sqrt(a)): local densities and the predicted count."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import sympy

from .arith import jacobi
from .errors import CapacityError, DomainError
from .euler import primes_up_to

#: largest number of residue vectors enumerated for a single prime
RESIDUE_BUDGET = 2 * 10**6


@dataclass(frozen=True)
class Form:
    """Homogeneous integer polynomial g(x0, ..., xn) stored as (coefficient, exponents) terms."""

    terms: tuple[tuple[int, tuple[int, ...]], ...]
    nvars: int
    text: str = ""

    @classmethod
    def parse(cls, text: str) -> "Form":
        """Parse e.g. 'x0**2 + 3*x1**2' (variables x0, x1, ...)."""
        try:
            expr = sympy.sympify(text)
        except (sympy.SympifyError, SyntaxError, TypeError) as exc:
            raise DomainError(f"cannot parse form {text!r}") from exc
        syms = sorted(expr.free_symbols, key=lambda s: s.name)
        names = [s.name for s in syms]
        if not names or any(not (n.startswith("x") and n[1:].isdigit()) for n in names):
            raise DomainError(f"variables must be named x0, x1, ...; got {names}")
        nvars = max(int(n[1:]) for n in names) + 1
        gens = sympy.symbols(f"x0:{nvars}")
        poly = sympy.Poly(expr, *gens)
        if not poly.is_homogeneous:
            raise DomainError(f"{text!r} is not homogeneous")
        terms = []
        for monom, coeff in poly.terms():
            if not coeff.is_integer:
                raise DomainError(f"{text!r} has a non-integer coefficient {coeff}")
            terms.append((int(coeff), tuple(int(e) for e in monom)))
        return cls(tuple(terms), nvars, text)

    @cached_property
    def degree(self) -> int:
        return sum(self.terms[0][1])

    @property
    def n(self) -> int:
        """Projective dimension."""
        return self.nvars - 1

    def __call__(self, x) -> int:
        total = 0
        for c, e in self.terms:
            t = c
            for xi, ei in zip(x, e):
                t *= int(xi) ** ei
            total += t
        return total

    def eval_mod(self, cols: np.ndarray, q: int) -> np.ndarray:
        """g over the rows of ``cols`` (shape (N, nvars)), reduced mod q, as int64."""
        out = np.zeros(cols.shape[0], dtype=np.int64)
        for c, e in self.terms:
            t = np.full(cols.shape[0], c % q, dtype=np.int64)
            for j, ej in enumerate(e):
                for _ in range(ej):
                    t = (t * cols[:, j]) % q
            out = (out + t) % q
        return out

    def eval_float(self, pts: np.ndarray) -> np.ndarray:
        out = np.zeros(pts.shape[0])
        for c, e in self.terms:
            t = np.full(pts.shape[0], float(c))
            for j, ej in enumerate(e):
                if ej:
                    t = t * pts[:, j] ** ej
            out = out + t
        return out


def _check(form: Form, a: int) -> None:
    if form.degree % 2:
        raise DomainError(f"form {form.text!r} has odd degree {form.degree}")
    if a == 0:
        raise DomainError("a must be nonzero")


def _split(n: int, p: int) -> tuple[int, int]:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e, n


@dataclass(frozen=True)
class PadicOmega:
    p: int
    depth: int
    value: float  # (1 - 1/p)^{1/2} (1 + ... + p^{-n}) vol
    volume: float  # vol{x in Z_p^{n+1} : (g(x), a)_p = 1}
    undetermined: float  # share of the volume filled in by the heuristic


def _heuristic_share(p: int, a: int) -> float:
    """Guess for the fraction of an undetermined residue class where (g, a)_p = 1."""
    if p != 2 and a % p and jacobi(a, p) == -1:
        # only the parity of v_p(g) matters; deeper valuations repeat the pattern
        return 1.0 / (p + 1)
    return 0.5


def padic_volume(form: Form, a: int, p: int, depth: int) -> tuple[float, float]:
    """(vol{x : (g(x), a)_p = 1}, undetermined mass), enumerating primitive x mod p^depth.

    g is homogeneous of even degree, so scaling x by p keeps the square class of g(x):
    vol = vol(primitive part) / (1 - p^{-(n+1)}).
    """
    _check(form, a)
    k = form.nvars
    q = p**depth
    if q**k > RESIDUE_BUDGET:
        raise CapacityError(f"{q}^{k} residue vectors exceed the budget")
    grids = np.meshgrid(*[np.arange(q, dtype=np.int64)] * k, indexing="ij")
    cols = np.stack([g.ravel() for g in grids], axis=1)
    prim = np.any(cols % p != 0, axis=1)
    cols = cols[prim]
    vals = form.eval_mod(cols, q)
    beta, w = _split(a, p)

    v = np.zeros(vals.shape[0], dtype=np.int64)
    u = vals.copy()
    zero = vals == 0
    u[zero] = 1
    for _ in range(depth):
        div = (u % p == 0) & ~zero
        if not div.any():
            break
        u[div] //= p
        v[div] += 1
    need = 3 if p == 2 else 1
    known = ~zero & (depth - v >= need)
    if p == 2:
        eps = lambda x: ((x % 4) == 3).astype(np.int64)  # noqa: E731
        omg = lambda x: np.isin(x % 8, (3, 5)).astype(np.int64)  # noqa: E731
        e = eps(u) * int((w % 4) == 3) + v * int(w % 8 in (3, 5)) + beta * omg(u)
        good = (e % 2) == 0
    else:
        residues = np.zeros(p, dtype=np.int64)
        residues[(np.arange(1, p) ** 2) % p] = 1
        leg_u = np.where(residues[u % p] == 1, 1, -1)
        leg_w = jacobi(w, p)
        sign = np.where((v * beta * ((p - 1) // 2)) % 2 == 1, -1, 1)
        sign = sign * np.where(beta % 2 == 1, leg_u, 1) * np.where(v % 2 == 1, leg_w, 1)
        good = sign == 1
    cell = float(p) ** (-depth * k)
    share = _heuristic_share(p, a)
    vol_known = cell * float(np.count_nonzero(good & known))
    undetermined = cell * float(np.count_nonzero(~known))
    scale = 1.0 / (1.0 - float(p) ** (-k))
    return (vol_known + share * undetermined) * scale, undetermined * scale


def omega_p(form: Form, a: int, p: int, depth: int = 3) -> PadicOmega:
    n = form.n
    # square classes at 2 need units mod 8, so go three levels deeper there
    d = depth + 3 if p == 2 else depth
    # shrink the depth until the enumeration fits
    while d > 1 and (p**d) ** form.nvars > RESIDUE_BUDGET:
        d -= 1
    if (p**d) ** form.nvars > RESIDUE_BUDGET:
        raise CapacityError(f"cannot enumerate residues mod {p} for {form.nvars} variables")
    vol, und = padic_volume(form, a, p, d)
    factor = math.sqrt(1 - 1 / p) * sum(p**-i for i in range(n + 1))
    return PadicOmega(p, d, factor * vol, vol, und)


def omega_inf(form: Form, a: int, samples: int = 400_000, seed: int = 12345) -> float:
    n = form.n
    if a > 0:
        return float((n + 1) * 2**n)
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-1.0, 1.0, size=(samples, form.nvars))
    frac = float(np.mean(form.eval_float(pts) > 0))
    return (n + 1) / 2 * frac * 2.0**form.nvars


def _is_unramified_norm(p: int, a: int) -> bool:
    """True when every p-adic value is a local norm: a is a nonzero square mod p, p odd, p not dividing a."""
    return p != 2 and a % p != 0 and jacobi(a, p) == 1


@dataclass(frozen=True)
class NormFormPrediction:
    naive: float  # coefficient of B^{n+1} / (log B)^{1/2}, naive height, x up to sign
    anticanonical: float  # coefficient of B / (log B)^{1/2}, anticanonical height
    omega_inf: float
    padic_product: float
    prime_bound: int
    depth: int
    undetermined_mass: float
    half_bound_product: float  # the same product truncated at prime_bound // 2

    @property
    def truncation_sensitivity(self) -> float:
        return abs(self.padic_product / self.half_bound_product - 1)


def predict_norm_form(
    form: Form | str, a: int, prime_bound: int = 1000, depth: int = 3, samples: int = 400_000
) -> NormFormPrediction:
    """Predicted constant for #{x in P^n(Q) : g(x) = t0^2 - a t1^2 solvable}.

    The product over p is only conditionally convergent in general and is taken in
    increasing order of p; its sensitivity to the truncation is reported.
    """
    if isinstance(form, str):
        form = Form.parse(form)
    _check(form, a)
    n = form.n
    w_inf = omega_inf(form, a, samples)
    log_prod = 0.0
    log_half = None
    und = 0.0
    half = prime_bound // 2
    for p in primes_up_to(prime_bound):
        p = int(p)
        if log_half is None and p > half:
            log_half = log_prod
        if _is_unramified_norm(p, a):
            log_prod += 0.5 * math.log1p(-1 / p) + math.log(sum(p**-i for i in range(n + 1)))
            continue
        om = omega_p(form, a, p, depth)
        log_prod += math.log(om.value) if om.value > 0 else -math.inf
        und += om.undetermined
    if log_half is None:
        log_half = log_prod
    prod = math.exp(log_prod)
    d = form.degree
    anti = 2 * w_inf * prod / math.sqrt(math.pi * d * (n + 1))
    # naive height B is anticanonical height B^{n+1}, and (log B^{n+1})^{1/2} = (n+1)^{1/2} (log B)^{1/2}
    naive = anti / math.sqrt(n + 1)
    return NormFormPrediction(naive, anti, w_inf, prod, prime_bound, depth, und, math.exp(log_half))
