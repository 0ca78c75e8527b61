"""Finite quotients SLL(2, Z/mZ): enumeration, the index formula, CRT.

The image of Gamma in SLL(2, Z/mZ) is the whole finite loop and the kernel
of reduction is Gamma(m), so ``index_gamma(m)`` is both the index of
Gamma(m) and the order of SLL(2, Z/mZ).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import gcd, prod
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .errors import NotCoprime, NotDivisor, TooLarge
from .ring import factor_int, mod_inv
from .zorn import LowerElementary, Sj, Tj, Uj, ZornMatrix, e, is_sll

MAX_PRIME_POWER = 9
ORDER_CAP = 10_000_000
DENSE_LUT_LIMIT = 10 ** 8


def index_gamma(n: int) -> int:
    """``n**7 * prod(1 - p**-4)`` over primes p dividing n, as an exact int."""
    if n < 1:
        raise ValueError(f"index_gamma needs n >= 1, got {n}")
    ps = [p for p, _ in factor_int(n)]
    return n ** 7 // prod(p ** 4 for p in ps) * prod(p ** 4 - 1 for p in ps)


def check_enumerable(m: int) -> None:
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    big = [p ** k for p, k in factor_int(m) if p ** k > MAX_PRIME_POWER]
    if big:
        raise TooLarge(f"prime-power factor {big[0]} of {m} exceeds {MAX_PRIME_POWER}")
    if index_gamma(m) > ORDER_CAP:
        raise TooLarge(f"SLL(2, Z/{m}) has {index_gamma(m)} elements (cap {ORDER_CAP})")


def _codes(E: np.ndarray, m: int) -> np.ndarray:
    E = E.astype(np.int64)
    digits = E.copy()
    digits[:, 0] -= 1
    digits[:, 7] -= 1
    digits %= m
    weights = m ** np.arange(7, -1, -1, dtype=np.int64)
    return digits @ weights


def _grid(m: int, dims: int) -> np.ndarray:
    return np.indices((m,) * dims).reshape(dims, -1).T.astype(np.int64)


def _enum_prime_power(p: int, k: int) -> np.ndarray:
    """Solve det = 1 row by row, following the counting argument.

    For each ``(a, y)`` not all divisible by p: if a is a unit, x is free and
    b is forced; otherwise some y_j is a unit, b and the other two x's are
    free and x_j is forced.
    """
    m = p ** k
    inv = np.zeros(m, np.int64)
    for r in range(m):
        if r % p:
            inv[r] = mod_inv(r, m)
    free = _grid(m, 3)
    nf = len(free)
    chunks = []
    for a in range(m):
        ys = _grid(m, 3)
        if a % p == 0:
            ys = ys[(ys % p != 0).any(axis=1)]
        if not len(ys):
            continue
        if a % p:
            y = np.repeat(ys, nf, axis=0)
            x = np.tile(free, (len(ys), 1))
            b = inv[a] * (1 + (x * y).sum(axis=1)) % m
            chunks.append(_assemble(a, x, y, b))
            continue
        unit = ys % p != 0
        pivot = unit.argmax(axis=1)
        for j in range(3):
            sel = ys[pivot == j]
            if not len(sel):
                continue
            y = np.repeat(sel, nf, axis=0)
            f = np.tile(free, (len(sel), 1))
            b = f[:, 0]
            others = [i for i in range(3) if i != j]
            x = np.zeros_like(y)
            x[:, others[0]] = f[:, 1]
            x[:, others[1]] = f[:, 2]
            rest = (x * y).sum(axis=1)
            x[:, j] = inv[y[:, j]] * (a * b - 1 - rest) % m
            chunks.append(_assemble(a, x, y, b))
    return np.concatenate(chunks)


def _assemble(a, x, y, b) -> np.ndarray:
    out = np.empty((len(x), 8), np.int8)
    out[:, 0] = a
    out[:, 1:4] = x
    out[:, 4:7] = y
    out[:, 7] = b
    return out


def _enum_filter(m: int) -> np.ndarray:
    """Brute force over all 8-tuples, one top-left value at a time."""
    rest = _grid(m, 7)  # x1 x2 x3 y1 y2 y3 b
    xy = (rest[:, 0:3] * rest[:, 3:6]).sum(axis=1)
    chunks = []
    for a in range(m):
        ok = (a * rest[:, 6] - xy) % m == 1 % m
        sel = rest[ok]
        chunks.append(_assemble(a, sel[:, 0:3], sel[:, 3:6], sel[:, 6]))
    return np.concatenate(chunks)


def _enum_crt(parts: Sequence["FiniteLoop"]) -> np.ndarray:
    E = parts[0].E.astype(np.int64)
    M = parts[0].m
    for L in parts[1:]:
        m2 = L.m
        c1 = m2 * mod_inv(m2, M)
        c2 = M * mod_inv(M, m2)
        M2 = M * m2
        E2 = L.E.astype(np.int64)
        E = ((E[:, None, :] * c1 + E2[None, :, :] * c2) % M2).reshape(-1, 8)
        M = M2
    return E.astype(np.int8)


class FiniteLoop:
    """SLL(2, Z/mZ) with canonically ordered elements (identity first)."""

    def __init__(self, m: int, E: np.ndarray):
        codes = _codes(E, m)
        order = np.argsort(codes, kind="stable")
        self.m = m
        self.E = np.ascontiguousarray(E[order])
        self.codes = codes[order]
        if len(self.codes) > 1 and (np.diff(self.codes) == 0).any():
            raise AssertionError("duplicate elements in enumeration")
        if m ** 8 <= DENSE_LUT_LIMIT:
            lut = np.full(m ** 8, -1, np.int32)
            lut[self.codes] = np.arange(len(self.codes), dtype=np.int32)
        else:
            lut = np.empty(0, np.int32)
        self.lut = lut
        if len(self) != index_gamma(m):
            raise AssertionError(f"enumerated {len(self)} elements, formula gives {index_gamma(m)}")
        if self.codes[0] != 0:
            raise AssertionError("identity missing from position 0")

    def __len__(self) -> int:
        return len(self.codes)

    order = property(__len__)

    def __repr__(self) -> str:
        return f"FiniteLoop(m={self.m}, order={len(self)})"

    def element(self, i: int) -> ZornMatrix:
        a, x1, x2, x3, y1, y2, y3, b = (int(v) for v in self.E[i])
        return ZornMatrix(a, (x1, x2, x3), (y1, y2, y3), b, self.m)

    def index(self, A: ZornMatrix) -> int:
        """Position of ``A`` (read modulo m); ``KeyError`` if not in the loop."""
        if A.mod and A.mod % self.m:
            raise ValueError(f"a mod-{A.mod} matrix has no image modulo {self.m}")
        code = K.encode(A.a, *A.x, *A.y, A.b, self.m)
        i = int(K.lookup(code, self.codes, self.lut))
        if i < 0:
            raise KeyError(f"{A} is not in SLL(2, Z/{self.m})")
        return i

    def mul(self, i: int, j: int) -> int:
        return int(K.mul(self.E, self.m, self.codes, self.lut, i, j))

    def mul_many(self, I, J) -> np.ndarray:
        I = np.asarray(I, np.int64)
        J = np.asarray(J, np.int64)
        I, J = np.broadcast_arrays(I, J)
        out = K.mul_many(self.E, self.m, self.codes, self.lut,
                         np.ascontiguousarray(I).ravel(), np.ascontiguousarray(J).ravel())
        return out.reshape(I.shape)

    @cached_property
    def inv(self) -> np.ndarray:
        return K.inverses(self.E, self.m, self.codes, self.lut)

    def power(self, i: int, s: int) -> int:
        if s < 0:
            i, s = int(self.inv[i]), -s
        return int(K.power(self.E, self.m, self.codes, self.lut, i, s))

    def kernel_args(self):
        return self.E, self.m, self.codes, self.lut

    def generators(self) -> list[int]:
        """Images of S_j, T_j, U_j and the lower elementaries L(e_j)."""
        tags = [t(j) for t in (Sj, Tj, Uj) for j in (1, 2, 3)]
        tags += [LowerElementary(e(j)) for j in (1, 2, 3)]
        return sorted({self.index(t.matrix(self.m)) for t in tags})

    def reduction_indices(self, target: "FiniteLoop") -> np.ndarray:
        """Index in ``target`` of each element reduced modulo ``target.m``."""
        if self.m % target.m:
            raise NotDivisor(f"{target.m} does not divide {self.m}")
        red = _codes(self.E.astype(np.int64) % target.m, target.m)
        if len(target.lut):
            return target.lut[red].astype(np.int64)
        return np.searchsorted(target.codes, red)


@lru_cache(maxsize=6)
def enumerate_sll(m: int) -> FiniteLoop:
    """All determinant-1 matrices modulo m.

    Prime powers are solved per row, other moduli up to 9 are filtered from
    all 8-tuples, larger composites are glued from prime powers by CRT.
    """
    check_enumerable(m)
    fac = factor_int(m)
    if m == 1:
        E = np.zeros((1, 8), np.int8)
    elif len(fac) == 1:
        E = _enum_prime_power(*fac[0])
    elif m <= MAX_PRIME_POWER:
        E = _enum_filter(m)
    else:
        E = _enum_crt([enumerate_sll(p ** k) for p, k in fac])
    return FiniteLoop(m, E)


def count_sll(m: int) -> int:
    return len(enumerate_sll(m))


def crt_iso_check(m1: int, m2: int) -> bool:
    """Componentwise reduction SLL(Z/m1m2) -> SLL(Z/m1) x SLL(Z/m2) is an isomorphism.

    Bijectivity is checked on every element; multiplicativity on one product
    per element, pairing element i with a fixed pseudo-random partner.
    """
    if gcd(m1, m2) != 1:
        raise NotCoprime(f"{m1} and {m2} are not coprime", witness=[m1, m2])
    check_enumerable(m1 * m2)
    L, L1, L2 = enumerate_sll(m1 * m2), enumerate_sll(m1), enumerate_sll(m2)
    r1 = L.reduction_indices(L1)
    r2 = L.reduction_indices(L2)
    if (r1 < 0).any() or (r2 < 0).any():
        return False
    pair = r1 * len(L2) + r2
    if len(L) != len(L1) * len(L2) or len(np.unique(pair)) != len(L):
        return False
    idx = np.arange(len(L), dtype=np.int64)
    partner = np.random.default_rng(0).permutation(len(L)).astype(np.int64)
    prod_ = L.mul_many(idx, partner)
    return bool(
        np.array_equal(r1[prod_], L1.mul_many(r1, r1[partner]))
        and np.array_equal(r2[prod_], L2.mul_many(r2, r2[partner])))


@dataclass(frozen=True, eq=False)
class SubloopSet:
    """Sorted member indices of a subset of ``parent``.

    ``status`` is ``"certified-closed"`` when closure under the loop
    operations is guaranteed, ``"partial"`` for a sampled lower bound.
    """
    parent: FiniteLoop
    members: np.ndarray
    status: str = "certified-closed"

    def __post_init__(self):
        mem = np.unique(np.asarray(self.members, np.int64))
        object.__setattr__(self, "members", mem)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, i) -> bool:
        k = np.searchsorted(self.members, i)
        return bool(k < len(self.members) and self.members[k] == i)

    def __eq__(self, other) -> bool:
        return isinstance(other, SubloopSet) and other.parent is self.parent \
            and np.array_equal(self.members, other.members)

    __hash__ = object.__hash__

    @property
    def certified(self) -> bool:
        return self.status == "certified-closed"

    def issubset(self, other: "SubloopSet") -> bool:
        return bool(np.isin(self.members, other.members).all())

    def intersection(self, other: "SubloopSet") -> "SubloopSet":
        status = "certified-closed" if self.certified and other.certified else "partial"
        return SubloopSet(self.parent, np.intersect1d(self.members, other.members), status)

    def elements(self) -> list[ZornMatrix]:
        return [self.parent.element(int(i)) for i in self.members]


def whole(L: FiniteLoop) -> SubloopSet:
    return SubloopSet(L, np.arange(len(L), dtype=np.int64))


def kernel_subloop(L: FiniteLoop, d: int) -> SubloopSet:
    """Elements congruent to I modulo d: the image of Gamma(d) in L."""
    if d < 1 or L.m % d:
        raise NotDivisor(f"{d} does not divide {L.m}")
    E = L.E.astype(np.int64) % d
    one = 1 % d
    mask = (E[:, 0] == one) & (E[:, 7] == one) & (E[:, 1:7] == 0).all(axis=1)
    return SubloopSet(L, np.nonzero(mask)[0])
