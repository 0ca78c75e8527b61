"""Constructive factorizations inside SLL(2, Z).

* ``factor_unital``: a congruence matrix with top-left entry 1 as a
  bracketed product of axis-parallel elementary matrices.
* ``decompose_congruence``: an element of Gamma(n) as a product of pieces of
  the three embedded copies of SL(2, Z) (in fact only axis 1 is needed, plus
  elementaries).
* ``split_gamma1_delta``: the same with a single axis-1 SL(2) factor and
  everything else elementary.
* ``sl2_factor``: Euclidean S/T word for an SL(2, Z) matrix.

Every tree is evaluated before it is returned; a mismatch is a bug and
raises ``AssertionError``.
"""
from __future__ import annotations

from typing import Optional

from .errors import InvalidSL2, NotInGamma, PreconditionViolated
from .expr import ExprTree, Leaf, Mul, evaluate, identity_leaf
from .ring import ext_gcd, unimodular_shift
from .zorn import (EmbeddedSL2, LowerElementary, UpperElementary, Vec3, ZornMatrix, e,
                   gamma_membership, is_sll, zdet, zinv, zmul)

_Tree = Optional[ExprTree]  # None stands for the identity


def _up(j: int, k: int) -> _Tree:
    return Leaf(UpperElementary(e(j, k))) if k else None


def _low(j: int, k: int) -> _Tree:
    return Leaf(LowerElementary(e(j, k))) if k else None


def _mul(left: _Tree, right: _Tree) -> _Tree:
    if left is None:
        return right
    if right is None:
        return left
    return Mul(left, right)


def _finish(tree: _Tree, target: ZornMatrix, what: str) -> ExprTree:
    if tree is None:
        tree = identity_leaf()
    got = evaluate(tree)
    if got != target:
        raise AssertionError(f"{what}: tree evaluates to {got}, expected {target}")
    return tree


def _upper_03(c: int, d: int) -> _Tree:
    # [[1, (0, c, d)], [0, 1]] = U(d e3) * (L(c d e1) * U(c e2))
    return _mul(_up(3, d), _mul(_low(1, c * d), _up(2, c)))


def _lower_023(u2: int, u3: int) -> _Tree:
    # [[1, 0], [(0, u2, u3), 1]] = L(u3 e3) * (U(-u2 u3 e1) * L(u2 e2))
    return _mul(_low(3, u3), _mul(_up(1, -u2 * u3), _low(2, u2)))


def _pure_lower(u: Vec3) -> _Tree:
    u1, u2, u3 = u
    # L(u) = L((0, u2, u3)) * (L(u1 e1) * U((0, u1 u3, -u1 u2)))
    return _mul(_lower_023(u2, u3), _mul(_low(1, u1), _upper_03(u1 * u3, -u1 * u2)))


def factor_unital(A: ZornMatrix, q: int) -> ExprTree:
    """Factor ``[[1, v], [u, b]]`` in Gamma(q) into axis-parallel elementaries.

    The result is ``((C * A3) * A2) * A1`` with ``A_j = U(v_j e_j)`` and the
    pure-lower ``C`` expanded further.  All leaf entries are multiples of q.
    """
    if q < 1:
        raise PreconditionViolated(f"level must be >= 1, got {q}")
    if A.mod != 0:
        raise PreconditionViolated("factor_unital works over Z")
    if A.a != 1 or zdet(A) != 1:
        raise PreconditionViolated("matrix must have a = 1 and det = 1", witness=A.to_json())
    if any(c % q for c in (*A.x, *A.y, A.b - 1)):
        raise PreconditionViolated(f"matrix is not congruent to I modulo {q}",
                                   witness=A.to_json())
    v, u = A.x, A.y
    C = Vec3(u[0] + v[2] * v[1], u[1] - v[2] * v[0], u[2] + v[1] * v[0])
    tree = _mul(_mul(_mul(_pure_lower(C), _up(3, v[2])), _up(2, v[1])), _up(1, v[0]))
    return _finish(tree, A, "factor_unital")


def _t_inverse_tree(j: int, expand: bool) -> ExprTree:
    # T_j^-1 = [[0, -e_j], [e_j, 0]] = U(-e_j) * (L(e_j) * U(-e_j)) inside the axis-j SL(2)
    if expand:
        return Mul(_up(j, -1), Mul(_low(j, 1), _up(j, -1)))
    return Leaf(EmbeddedSL2(j, ((0, -1), (1, 0))))


def _decompose(A: ZornMatrix, n: int, expand_pivot: bool) -> ExprTree:
    if A.mod != 0:
        raise NotInGamma("decomposition works over Z")
    if n < 1:
        raise NotInGamma(f"level must be >= 1, got {n}")
    if not (is_sll(A) and gamma_membership(A, n)):
        raise NotInGamma(f"matrix is not in Gamma({n})", witness=A.to_json())
    pivot: _Tree = None
    target = A
    if A.a == 0:
        # only possible for n = 1; some x_j y_j != 0 because -x.y = 1
        j = next(j for j in (1, 2, 3) if A.x[j - 1] * A.y[j - 1] != 0)
        T = EmbeddedSL2(j, ((0, 1), (-1, 0))).matrix()
        A = zmul(T, A)
        pivot = _t_inverse_tree(j, expand_pivot)
    a, u, v, b = A.a, A.x, A.y, A.b
    # (u1, v2, v3) is unimodular modulo a; shift u1 to a unit of Z/(a)
    t, s = unimodular_shift(a, u[0], v[1], v[2])
    u1p = u[0] + v[1] * t + v[2] * s
    up = Vec3(u1p, u[1] - v[0] * t, u[2] - v[0] * s)
    B = ZornMatrix(a, up, v, b)
    corr = zmul(zinv(B), A)
    shown = ZornMatrix(1, (u - up).scale(b), -up.cross(u), 1)
    if corr != shown:
        raise AssertionError(f"correction factor {corr} differs from closed form {shown}")
    corr_tree = None if corr.is_identity() else factor_unital(corr, n)
    g, x, y = ext_gcd(a, n * u1p)
    if g != 1:
        raise AssertionError(f"gcd(a, n*u1') = {g}; shift failed")
    G1 = EmbeddedSL2(1, ((a, u1p), (-n * y, x)))
    W = zmul(B, zinv(G1.matrix()))
    if W.a != 1 or not gamma_membership(W, n):
        raise AssertionError(f"left factor {W} is not unital in Gamma({n})")
    W_tree = None if W.is_identity() else factor_unital(W, n)
    G1_tree = None if G1.matrix().is_identity() else Leaf(G1)
    tree = _mul(_mul(W_tree, G1_tree), corr_tree)
    if pivot is not None:
        tree = Mul(pivot, tree if tree is not None else identity_leaf())
    return _finish(tree, target, "decompose_congruence")


def decompose_congruence(A: ZornMatrix, n: int) -> ExprTree:
    """Write ``A`` in Gamma(n) over embedded SL(2) pieces and elementaries.

    Leaves are axis-parallel elementaries with entries in nZ or
    ``EmbeddedSL2(j, M)`` with ``M = I (mod n)``.
    """
    return _decompose(A, n, expand_pivot=False)


def split_gamma1_delta(A: ZornMatrix, n: int) -> ExprTree:
    """Like ``decompose_congruence`` but with at most one axis-1 SL(2) leaf."""
    return _decompose(A, n, expand_pivot=True)


def sl2_leaf_ok(tag, n: int) -> bool:
    """Leaf contract shared by the decomposition routines."""
    if isinstance(tag, (UpperElementary, LowerElementary)):
        return sum(1 for c in tag.v if c) <= 1 and all(c % n == 0 for c in tag.v)
    if isinstance(tag, EmbeddedSL2):
        (p, q), (r, s) = tag.m
        return (p - 1) % n == 0 and q % n == 0 and r % n == 0 and (s - 1) % n == 0
    return False


# -- SL(2, Z) words ---------------------------------------------------------

S_MAT = ((1, 1), (0, 1))
T_MAT = ((0, 1), (-1, 0))


def _mat_mul(P, Q):
    (a, b), (c, d) = P
    (e_, f), (g, h) = Q
    return ((a * e_ + b * g, a * f + b * h), (c * e_ + d * g, c * f + d * h))


def _mat_pow(P, k: int):
    if k < 0:
        (a, b), (c, d) = P  # det 1
        P, k = ((d, -b), (-c, a)), -k
    out = ((1, 0), (0, 1))
    for _ in range(k):
        out = _mat_mul(out, P)
    return out


def eval_word(word: list[tuple[str, int]]):
    out = ((1, 0), (0, 1))
    for letter, k in word:
        if letter == "S":
            # S^k is [[1, k], [0, 1]]; no need to loop
            out = _mat_mul(out, ((1, k), (0, 1)))
        else:
            out = _mat_mul(out, _mat_pow(T_MAT, k % 4))
    return out


def format_word(word: list[tuple[str, int]]) -> str:
    if not word:
        return "1"
    return " ".join(l if k == 1 else f"{l}^{k}" for l, k in word)


def sl2_factor(M) -> list[tuple[str, int]]:
    """Euclidean factorization of ``M`` in SL(2, Z) as a word in S and T.

    Returns ``[(letter, exponent), ...]`` whose ordered product is ``M``.
    """
    (p, q), (r, s) = M
    if p * s - q * r != 1:
        raise InvalidSL2(f"determinant of {M} is {p * s - q * r}, not 1")
    ops: list[tuple[str, int]] = []  # each op is the inverse of what was applied on the left
    while r != 0:
        # truncated quotient: |p - k r| = |p| mod |r|, the ordinary Euclid remainder
        k = abs(p) // abs(r) * (1 if (p > 0) == (r > 0) else -1)
        if k:
            p, q = p - k * r, q - k * s  # S^-k on the left
            ops.append(("S", k))
        p, q, r, s = -r, -s, p, q  # T^-1 on the left
        ops.append(("T", 1))
    # now M' = [[p, q], [0, s]] with p = s = +-1
    if p == 1:
        ops.append(("S", q))
    else:
        ops.append(("T", 2))
        ops.append(("S", -q))  # -I * S^-q = [[-1, q], [0, -1]]
    word: list[tuple[str, int]] = []
    for letter, k in ops:
        if k == 0:
            continue
        if word and word[-1][0] == letter:
            k += word[-1][1]
            word.pop()
            if letter == "T":
                k %= 4
            if k == 0:
                continue
        word.append((letter, k))
    if eval_word(word) != ((M[0][0], M[0][1]), (M[1][0], M[1][1])):
        raise AssertionError(f"sl2 word {format_word(word)} does not evaluate to {M}")
    return word
