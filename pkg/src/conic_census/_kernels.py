"""Compiled inner loops.

Everything here works on plain integers and numpy arrays so numba can compile it
in nopython mode.  The functions mirror the pure-Python reference routines in
``symbols`` and ``conics``; the test-suite checks the two paths against each other.
"""

import numba as nb
import numpy as np

_JIT = dict(nogil=True, cache=True)


@nb.njit(**_JIT)
def squarefree_kernel_array(spf):
    n_max = spf.shape[0] - 1
    out = np.zeros(n_max + 1, dtype=np.int64)
    if n_max >= 1:
        out[1] = 1
    for n in range(2, n_max + 1):
        m = n
        k = 1
        while m > 1:
            p = spf[m]
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e & 1:
                k *= p
        out[n] = k
    return out


@nb.njit(**_JIT)
def tau_array(spf):
    n_max = spf.shape[0] - 1
    out = np.zeros(n_max + 1, dtype=np.int32)
    if n_max >= 1:
        out[1] = 1
    for n in range(2, n_max + 1):
        p = spf[n]
        m = n // p
        e = 1
        while m % p == 0:
            m //= p
            e += 1
        out[n] = out[m] * (e + 1)
    return out


@nb.njit(**_JIT)
def gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@nb.njit(**_JIT)
def jacobi(a, n):
    # n odd positive
    a = a % n
    r = 1
    while a != 0:
        while (a & 1) == 0:
            a >>= 1
            m8 = n & 7
            if m8 == 3 or m8 == 5:
                r = -r
        a, n = n, a
        if (a & 3) == 3 and (n & 3) == 3:
            r = -r
        a = a % n
    if n == 1:
        return r
    return 0


@nb.njit(**_JIT)
def soluble_positive(t0, t1, t2, spf, sqf):
    """1 if t0*x^2 + t1*y^2 = t2*z^2 has a nontrivial rational point, else 0.

    All three coefficients positive and inside the sieve.  Uses Legendre's
    criterion on the squarefree, pairwise coprime model.
    """
    s0 = sqf[t0]
    s1 = sqf[t1]
    s2 = sqf[t2]
    g = gcd(gcd(s0, s1), s2)
    if g > 1:
        s0 //= g
        s1 //= g
        s2 //= g
    g01 = gcd(s0, s1)
    g02 = gcd(s0, s2)
    g12 = gcd(s1, s2)
    # A x^2 + B y^2 = C z^2, pairwise coprime and squarefree
    A = (s0 // (g01 * g02)) * g12
    B = (s1 // (g01 * g12)) * g02
    C = (s2 // (g02 * g12)) * g01
    for which in range(3):
        if which == 0:
            m = s0
        elif which == 1:
            m = s1
        else:
            m = s2
        while m > 1:
            p = spf[m]
            m //= p
            if p == 2:
                continue
            if which == 1 and s0 % p == 0:
                continue
            if which == 2 and (s0 % p == 0 or s1 % p == 0):
                continue
            if A % p == 0:
                x = ((B % p) * (C % p)) % p
            elif B % p == 0:
                x = ((A % p) * (C % p)) % p
            else:
                x = (p - ((A % p) * (B % p)) % p) % p
            if jacobi(x, p) != 1:
                return 0
    return 1


@nb.njit(**_JIT)
def count_primitive_positive(lo, hi, bound, spf, sqf):
    """Weighted count of primitive (a, b, c) in [1, bound]^3 with a x^2 + b y^2 = c z^2 soluble.

    Only a in [lo, hi) and b >= a are visited; off-diagonal pairs carry weight 2.
    """
    total = 0
    for a in range(lo, hi):
        for b in range(a, bound + 1):
            gab = gcd(a, b)
            w = 1 if a == b else 2
            for c in range(1, bound + 1):
                if gab != 1 and gcd(gab, c) != 1:
                    continue
                if soluble_positive(a, b, c, spf, sqf):
                    total += w
    return total


@nb.njit(**_JIT)
def count_all_positive(i_lo, i_hi, bound, kernels, weights, spf, sqf):
    """Same as count_primitive_positive without the gcd condition.

    Iterates over squarefree kernels; ``weights[i]`` is the number of t <= bound
    whose squarefree kernel is ``kernels[i]``.
    """
    total = 0
    n = kernels.shape[0]
    for i in range(i_lo, i_hi):
        s0 = kernels[i]
        w0 = weights[i]
        for j in range(i, n):
            s1 = kernels[j]
            w01 = w0 * weights[j]
            if j != i:
                w01 *= 2
            for k in range(n):
                if soluble_positive(s0, s1, kernels[k], spf, sqf):
                    total += w01 * weights[k]
    return total


@nb.njit(**_JIT)
def count_generalized_slab(lo, hi, x2, x3, b1, b2, b3, m12, m13, m23, spf, sqf):
    """N_{b,m} restricted to n1 in [lo, hi)."""
    mm = m12 * m13 * m23
    g23 = gcd(b2, b3)
    g13 = gcd(b1, b3)
    g12 = gcd(b1, b2)
    total = 0
    for n1 in range(lo, hi):
        if sqf[n1] != n1 or gcd(n1, mm) != 1 or gcd(n1, g23) != 1:
            continue
        for n2 in range(1, x2 + 1):
            if sqf[n2] != n2 or gcd(n2, mm) != 1 or gcd(n2, g13) != 1:
                continue
            if gcd(n1, n2) != 1:
                continue
            n12 = n1 * n2
            for n3 in range(1, x3 + 1):
                if sqf[n3] != n3 or gcd(n3, mm) != 1 or gcd(n3, g12) != 1:
                    continue
                if gcd(n12, n3) != 1:
                    continue
                if soluble_positive(m23 * n1, m13 * n2, m12 * n3, spf, sqf):
                    total += 1
    return total


@nb.njit(**_JIT)
def sum_two_squares_mask(spf):
    """mask[k] = 1 iff every prime 3 mod 4 divides k to an even power."""
    n_max = spf.shape[0] - 1
    out = np.zeros(n_max + 1, dtype=np.uint8)
    if n_max >= 1:
        out[1] = 1
    for n in range(2, n_max + 1):
        p = spf[n]
        m = n // p
        e = 1
        while m % p == 0:
            m //= p
            e += 1
        ok = out[m]
        if p % 4 == 3 and (e & 1):
            ok = 0
        out[n] = ok
    return out


@nb.njit(**_JIT)
def count_coprime_pairs(values):
    """#{(i, j) : gcd(values[i], values[j]) = 1}, ordered pairs."""
    n = values.shape[0]
    total = 0
    for i in range(n):
        a = values[i]
        for j in range(i, n):
            if gcd(a, values[j]) == 1:
                total += 1 if i == j else 2
    return total


@nb.njit(**_JIT)
def triple_inverse_tau_sum(x1, x2, x3, q1, q2, q3, a1, a2, a3, d1, d2, d3, sqf, tau):
    """Sum of mu^2(n1 n2 n3) / (tau(n1) tau(n2) tau(n3)) with congruence and coprimality conditions."""
    total = 0.0
    for n1 in range(1, x1 + 1):
        if (n1 - a1) % q1 != 0 or sqf[n1] != n1 or gcd(n1, d1) != 1:
            continue
        t1 = 1.0 / tau[n1]
        for n2 in range(1, x2 + 1):
            if (n2 - a2) % q2 != 0 or sqf[n2] != n2 or gcd(n2, d2) != 1:
                continue
            if gcd(n1, n2) != 1:
                continue
            t12 = t1 / tau[n2]
            n12 = n1 * n2
            for n3 in range(1, x3 + 1):
                if (n3 - a3) % q3 != 0 or sqf[n3] != n3 or gcd(n3, d3) != 1:
                    continue
                if gcd(n12, n3) != 1:
                    continue
                total += t12 / tau[n3]
    return total
