"""Parenthesization trees: the certificate format for factorizations.

The loop is not associative, so a factorization is only meaningful together
with its bracketing.  Trees are immutable; ``evaluate`` respects the shape
exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .errors import ModulusMismatch, NotInvertible
from .zorn import (ZERO, GeneratorTag, LowerElementary, UpperElementary, ZornMatrix,
                   is_gll, tag_from_json, zinv, zmul)


@dataclass(frozen=True)
class Leaf:
    tag: GeneratorTag
    mod: int = 0


@dataclass(frozen=True)
class Mul:
    left: "ExprTree"
    right: "ExprTree"


@dataclass(frozen=True)
class Conj:
    """``(outer * inner) * outer^-1``."""
    outer: ZornMatrix
    inner: "ExprTree"


ExprTree = Union[Leaf, Mul, Conj]


def identity_leaf(mod: int = 0) -> Leaf:
    """The empty product."""
    return Leaf(UpperElementary(ZERO), mod)


def evaluate(t: ExprTree) -> ZornMatrix:
    # iterative post-order so that deep left-combs do not hit the recursion limit
    stack: list = [(t, False)]
    values: list[ZornMatrix] = []
    while stack:
        node, done = stack.pop()
        if isinstance(node, Leaf):
            values.append(node.tag.matrix(node.mod))
        elif isinstance(node, Mul):
            if done:
                right = values.pop()
                left = values.pop()
                values.append(zmul(left, right))
            else:
                stack += [(node, True), (node.right, False), (node.left, False)]
        elif isinstance(node, Conj):
            if done:
                inner = values.pop()
                T = node.outer
                if T.mod != inner.mod:
                    raise ModulusMismatch("conjugating matrix has a different modulus")
                if not is_gll(T):
                    raise NotInvertible("conjugating matrix is not invertible",
                                        witness=T.to_json())
                values.append(zmul(zmul(T, inner), zinv(T)))
            else:
                stack += [(node, True), (node.inner, False)]
        else:
            raise TypeError(f"not an expression tree: {node!r}")
    return values[0]


# alternate name for evaluate
eval_tree = evaluate


def iter_nodes(t: ExprTree) -> Iterator[ExprTree]:
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Mul):
            stack += [node.right, node.left]
        elif isinstance(node, Conj):
            stack.append(node.inner)


def leaves(t: ExprTree) -> list[GeneratorTag]:
    return [n.tag for n in iter_nodes(t) if isinstance(n, Leaf)]


def tree_size(t: ExprTree) -> int:
    return sum(1 for _ in iter_nodes(t))


def certify_level(t: ExprTree, n: int) -> bool:
    """Syntactic certificate that ``evaluate(t)`` lies in Delta(n).

    Leaves must be elementary with every vector entry divisible by ``n``;
    conjugation by any invertible matrix is allowed.
    """
    for node in iter_nodes(t):
        if isinstance(node, Leaf):
            tag = node.tag
            if not isinstance(tag, (UpperElementary, LowerElementary)):
                return False
            if any(c % n for c in tag.v):
                return False
        elif isinstance(node, Conj) and not is_gll(node.outer):
            return False
    return True


def product(trees: list[ExprTree], mod: int = 0) -> ExprTree:
    """Left-to-right right-nested product ``t0 * (t1 * (... ))``."""
    if not trees:
        return identity_leaf(mod)
    out = trees[-1]
    for t in reversed(trees[:-1]):
        out = Mul(t, out)
    return out


def reduce_tree(t: ExprTree, m: int) -> ExprTree:
    """The same tree with every leaf and conjugator read modulo ``m``."""
    if isinstance(t, Leaf):
        return Leaf(t.tag, m)
    if isinstance(t, Mul):
        return Mul(reduce_tree(t.left, m), reduce_tree(t.right, m))
    return Conj(ZornMatrix(t.outer.a, t.outer.x, t.outer.y, t.outer.b, m),
                reduce_tree(t.inner, m))


def to_json(t: ExprTree) -> dict:
    if isinstance(t, Leaf):
        return {"leaf": {**t.tag.to_json(), "mod": t.mod}}
    if isinstance(t, Mul):
        return {"mul": [to_json(t.left), to_json(t.right)]}
    if isinstance(t, Conj):
        return {"conj": {"outer": t.outer.to_json(), "inner": to_json(t.inner)}}
    raise TypeError(f"not an expression tree: {t!r}")


def from_json(obj: dict) -> ExprTree:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValueError("tree JSON must be a single-key object")
    (key, val), = obj.items()
    if key == "leaf":
        val = dict(val)
        mod = val.pop("mod", 0)
        return Leaf(tag_from_json(val), mod)
    if key == "mul":
        left, right = val
        return Mul(from_json(left), from_json(right))
    if key == "conj":
        return Conj(ZornMatrix.from_json(val["outer"]), from_json(val["inner"]))
    raise ValueError(f"unknown tree node {key!r}")
