"""Exact integer and modular arithmetic.

Everything here works on Python ints, so no intermediate ever overflows.
"""
from __future__ import annotations

from functools import reduce
from itertools import count
from math import gcd, isqrt, prod
from typing import Iterator, Sequence

from .errors import NotCoprime, NotInvertible, NotUnimodular


class Modulus(int):
    """A ring selector: 0 means the integers, m >= 1 means Z/mZ."""

    def __new__(cls, m: int = 0):
        m = int(m)
        if m < 0:
            raise ValueError(f"modulus must be >= 0, got {m}")
        return super().__new__(cls, m)

    def reduce(self, value: int) -> int:
        return value % self if self else value

    def is_unit(self, value: int) -> bool:
        if self == 0:
            return value in (1, -1)
        return gcd(value, self) == 1

    def __repr__(self) -> str:
        return f"Modulus({int(self)})"


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``.

    When ``a`` divides ``b`` the certificate is ``(|a|, sign(a), 0)``.
    """
    if a == 0 and b == 0:
        return 0, 0, 0
    if a != 0 and b % a == 0:
        return abs(a), (1 if a > 0 else -1), 0
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def vec_ext_gcd(values: Sequence[int]) -> tuple[int, list[int]]:
    """Bezout coefficients for a whole vector: ``sum(c*v) == gcd(values)``."""
    g, coeffs = 0, []
    for v in values:
        g, x, y = ext_gcd(g, v)
        coeffs = [c * x for c in coeffs] + [y]
    return g, coeffs


def mod_inv(a: int, m: int) -> int:
    if m < 1:
        raise ValueError("modulus must be >= 1")
    if m == 1:
        return 0
    g, x, _ = ext_gcd(a % m, m)
    if g != 1:
        raise NotInvertible(f"{a} is not invertible modulo {m}", witness={"gcd": g})
    return x % m


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, isqrt(n) + 1, 2))


def factor_int(n: int) -> list[tuple[int, int]]:
    """Trial-division factorization, primes increasing; ``[]`` for 1."""
    if n < 1:
        raise ValueError(f"factor_int needs n >= 1, got {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def crt(residues: Sequence[tuple[int, int]]) -> tuple[int, int]:
    if not residues:
        raise ValueError("crt needs at least one congruence")
    mods = [m for _, m in residues]
    if any(m < 1 for m in mods):
        raise ValueError("crt moduli must be >= 1")
    for i in range(len(mods)):
        for j in range(i + 1, len(mods)):
            if gcd(mods[i], mods[j]) != 1:
                raise NotCoprime(f"moduli {mods[i]} and {mods[j]} share a factor",
                                 witness=[mods[i], mods[j]])
    M = prod(mods)
    r = 0
    for ri, mi in residues:
        Mi = M // mi
        r += ri * Mi * mod_inv(Mi, mi)
    return r % M, M


def zigzag(bound: int | None = None) -> Iterator[int]:
    """0, 1, -1, 2, -2, ... optionally stopping after +-bound."""
    yield 0
    for k in count(1):
        if bound is not None and k > bound:
            return
        yield k
        yield -k


def _zigzag_rank(v: int) -> int:
    """Position of ``v`` in 0, 1, -1, 2, -2, ..."""
    return 2 * v - 1 if v > 0 else -2 * v


def _pairs_by_norm(bound: int) -> Iterator[tuple[int, int]]:
    # rings of constant max(|t|,|s|), each ring ordered lexicographically in zigzag order
    for r in range(bound + 1):
        ring = [(t, s) for t in range(-r, r + 1) for s in range(-r, r + 1)
                if max(abs(t), abs(s)) == r]
        ring.sort(key=lambda p: (_zigzag_rank(p[0]), _zigzag_rank(p[1])))
        yield from ring


def unimodular_shift(a: int, u1: int, v2: int, v3: int) -> tuple[int, int]:
    """Find ``(t, s)`` with ``gcd(u1 + v2*t + v3*s, a) == 1``.

    This is the Z/(a) instance of completing a unimodular row to a unit.
    Pairs are tried by increasing ``max(|t|, |s|)``; inside a ring the order
    is lexicographic over 0, 1, -1, 2, -2, ...
    """
    if a == 0:
        raise ValueError("unimodular_shift needs a != 0")
    if reduce(gcd, (u1, v2, v3, a)) != 1:
        raise NotUnimodular(f"({u1}, {v2}, {v3}) is not unimodular modulo {a}",
                            witness={"gcd": reduce(gcd, (u1, v2, v3, a))})
    # residues mod |a| repeat, so +-|a| always suffices
    for t, s in _pairs_by_norm(abs(a)):
        if gcd(u1 + v2 * t + v3 * s, a) == 1:
            return t, s
    raise AssertionError("unreachable: unimodular row without a unit shift")


def unit_shift(a: int, d: int, m: int) -> int:
    """Smallest ``t`` (zigzag order) with ``a - t*d`` a unit modulo ``m``."""
    if gcd(gcd(a, d), m) != 1:
        raise NotUnimodular(f"({a}, {d}) is not unimodular modulo {m}")
    for t in zigzag(max(m, 1)):
        if gcd(a - t * d, m) == 1:
            return t
    raise AssertionError("unreachable: unimodular pair without a unit shift")
