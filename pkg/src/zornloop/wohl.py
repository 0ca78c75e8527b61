"""Wohlfahrt-type splitting of congruence elements and the level-gcd step.

``wohlfahrt_split(A, n1, n2)`` writes ``A`` in Gamma(n1) as ``B * C`` where
``B`` comes with a tree certifying membership in Delta(n1) and
``C = I (mod n2)``.
"""
from __future__ import annotations

from math import gcd

from .errors import DegenerateV, NotInGamma
from .expr import Conj, ExprTree, Leaf, Mul, certify_level, evaluate
from .factor import factor_unital
from .ring import ext_gcd, mod_inv, unit_shift, vec_ext_gcd
from .zorn import (ZERO, LowerElementary, UpperElementary, Vec3, ZornMatrix, e,
                   gamma_membership, power, zinv, zmul)


def _case1(A: ZornMatrix, n1: int) -> ExprTree:
    # a = 1 (mod n2): B = [[1, v], [u, ab]] agrees with A modulo n2
    return factor_unital(ZornMatrix(1, A.x, A.y, A.a * A.b), n1)


def _case2(A: ZornMatrix, n1: int, n2: int) -> ExprTree:
    tail = None
    if A.x == ZERO:
        # gcd(v) = 0 has no primitive direction; move off it first
        A = zmul(A, UpperElementary(e(1, n1)).matrix())
        tail = Leaf(UpperElementary(e(1, -n1)))
        if A.x == ZERO:
            raise DegenerateV("top-right vector stays zero after the correction")
    a, v, u, b = A.a, A.x, A.y, A.b
    c = gcd(gcd(v[0], v[1]), v[2])
    vp = Vec3(v[0] // c, v[1] // c, v[2] // c)
    ap = mod_inv(a, n2)
    w = vp.scale(ap * (1 - a - c))
    AX = zmul(A, UpperElementary(w).matrix())
    if (a * b - 1) % c:
        raise AssertionError(f"{c} does not divide ab - 1 = {a * b - 1}")
    shown = ZornMatrix(a, vp.scale(1 - a), u, b + ap * (1 - a - c) * ((a * b - 1) // c), n2)
    if ZornMatrix(AX.a, AX.x, AX.y, AX.b, n2) != shown:
        raise AssertionError(f"A*X = {AX} disagrees with its closed form modulo {n2}")
    _, t = vec_ext_gcd(vp)
    T1 = LowerElementary(Vec3(*t)).matrix()
    D = zmul(zmul(zinv(T1), AX), T1)
    if (D.a - 1) % n2:
        raise AssertionError(f"conjugate {D} does not have a = 1 modulo {n2}")
    tree: ExprTree = Mul(Conj(T1, _case1(D, n1)), Leaf(UpperElementary(-w)))
    if tail is not None:
        tree = Mul(tree, tail)
    return tree


def _approximant(A: ZornMatrix, n1: int, n2: int) -> ExprTree:
    """A tree in Delta(n1) whose value agrees with ``A`` modulo ``n2``."""
    a = A.a
    if (a - 1) % n2 == 0:
        return _case1(A, n1)
    if gcd(a, n2) == 1:
        return _case2(A, n1, n2)
    d = A.x.dot(A.y)
    t = unit_shift(a, d, n2)
    T = LowerElementary(A.y.scale(-t)).matrix()
    D = zmul(zmul(zinv(T), A), T)
    if D.a != a - t * d:
        raise AssertionError(f"conjugate has a = {D.a}, expected {a - t * d}")
    return Conj(T, _case2(D, n1, n2))


def wohlfahrt_split(A: ZornMatrix, n1: int, n2: int) -> tuple[ExprTree, ZornMatrix]:
    """Return ``(B_tree, C)`` with ``A == evaluate(B_tree) * C``.

    ``B_tree`` passes ``certify_level(., n1)`` and ``C`` lies in Gamma(n2).
    """
    if n1 < 1 or n2 < 1:
        raise NotInGamma("levels must be >= 1")
    if A.mod != 0 or not gamma_membership(A, n1):
        raise NotInGamma(f"matrix is not in Gamma({n1})", witness=A.to_json())
    tree = _approximant(A, n1, n2)
    B = evaluate(tree)
    C = zmul(zinv(B), A)
    if not certify_level(tree, n1):
        raise AssertionError("splitting tree failed its level certificate")
    if not gamma_membership(C, n2) or zmul(B, C) != A:
        raise AssertionError(f"cofactor {C} is not a valid Gamma({n2}) remainder")
    return tree, C


def delta_level_join(m1: int, m2: int) -> tuple[int, int, int]:
    """``(d, t, s)`` with ``d = gcd(m1, m2) = t*m1 + s*m2``."""
    return ext_gcd(m1, m2)


def level_join_identity(m1: int, m2: int, x) -> bool:
    """Check ``E(d x) == E(m1 x)^t * E(m2 x)^s`` for upper and lower elementaries."""
    d, t, s = delta_level_join(m1, m2)
    x = Vec3(*x)
    for kind in (UpperElementary, LowerElementary):
        lhs = kind(x.scale(d)).matrix()
        rhs = zmul(power(kind(x.scale(m1)).matrix(), t), power(kind(x.scale(m2)).matrix(), s))
        if lhs != rhs:
            return False
    return True
