import json

import pytest
from hypothesis import given, strategies as st

from zornloop.errors import ModulusMismatch, NotInvertible
from zornloop.expr import (Conj, Leaf, Mul, certify_level, evaluate, from_json, identity_leaf,
                           leaves, product, reduce_tree, to_json, tree_size)
from zornloop.zorn import (I, EmbeddedSL2, LowerElementary, Sj, Tj, Uj, UpperElementary,
                           ZornMatrix, e, reduce_mod, zdet, zinv, zmul)

U, L = UpperElementary, LowerElementary


def test_leaf():
    assert evaluate(Leaf(Sj(1))) == ZornMatrix(1, (1, 0, 0), (0, 0, 0), 1)


def test_nested_product_example():
    t = Mul(Leaf(L(e(2, 2))), Mul(Leaf(L(e(1, 2))), Leaf(U((0, 0, -4)))))
    assert evaluate(t) == ZornMatrix(1, (0, 0, 0), (2, 2, 0), 1)
    assert leaves(t) == [L(e(2, 2)), L(e(1, 2)), U((0, 0, -4))]
    assert tree_size(t) == 5


def test_conj_of_identity():
    T = ZornMatrix(1, (1, 0, 0), (1, 0, 0), 2)
    assert evaluate(Conj(T, identity_leaf())) == I


def test_conj_association():
    T = ZornMatrix(1, (1, 0, 0), (1, 0, 0), 2)
    t = Leaf(Uj(2))
    assert evaluate(Conj(T, t)) == zmul(zmul(T, evaluate(t)), zinv(T))


def test_conj_needs_invertible():
    with pytest.raises(NotInvertible):
        evaluate(Conj(ZornMatrix(2, (0, 0, 0), (0, 0, 0), 1), Leaf(Sj(1))))


def test_mixed_moduli():
    with pytest.raises(ModulusMismatch):
        evaluate(Mul(Leaf(Sj(1), 2), Leaf(Sj(1), 3)))


def test_leaves_and_size():
    assert leaves(Leaf(Tj(1))) == [Tj(1)] and tree_size(Leaf(Tj(1))) == 1
    a, b = Sj(1), Tj(2)
    assert leaves(Mul(Leaf(a), Leaf(b))) == [a, b] and tree_size(Mul(Leaf(a), Leaf(b))) == 3


def test_certify_level_examples():
    assert certify_level(Leaf(U((2, 0, 4))), 2)
    assert not certify_level(Leaf(Sj(1, 1)), 2)
    T = ZornMatrix(1, (1, 0, 0), (1, 0, 0), 2)
    assert certify_level(Conj(T, Leaf(L((0, 6, 0)))), 3)
    assert not certify_level(Leaf(EmbeddedSL2(1, ((1, 2), (0, 1)))), 2)
    assert not certify_level(Conj(ZornMatrix(2, (0, 0, 0), (0, 0, 0), 1), Leaf(U((2, 0, 0)))), 2)


vec = st.tuples(*[st.integers(-3, 3)] * 3)


@st.composite
def trees(draw, depth=4):
    if depth == 0 or draw(st.booleans()):
        kind = draw(st.sampled_from([U, L]))
        return Leaf(kind(draw(vec)))
    if draw(st.integers(0, 3)) == 0:
        k = draw(st.integers(-2, 2))
        return Conj(Sj(draw(st.integers(1, 3)), k).matrix(), draw(trees(depth - 1)))
    return Mul(draw(trees(depth - 1)), draw(trees(depth - 1)))


@given(trees())
def test_eval_stable_and_det1(t):
    assert evaluate(t) == evaluate(t)
    assert zdet(evaluate(t)) == 1


@given(trees())
def test_json_round_trip(t):
    assert from_json(json.loads(json.dumps(to_json(t)))) == t


@given(trees(), st.integers(1, 12))
def test_reduce_tree_commutes(t, m):
    assert reduce_mod(evaluate(t), m) == evaluate(reduce_tree(t, m))


@given(trees(), st.integers(1, 6))
def test_certify_level_divisors(t, n):
    scaled = _scale(t, n * 2)
    assert certify_level(scaled, n * 2)
    assert all(certify_level(scaled, d) for d in range(1, 2 * n + 1) if (2 * n) % d == 0)


def _scale(t, k):
    if isinstance(t, Leaf):
        return Leaf(type(t.tag)(t.tag.v.scale(k)))
    if isinstance(t, Mul):
        return Mul(_scale(t.left, k), _scale(t.right, k))
    return Conj(t.outer, _scale(t.inner, k))


def test_product_helper():
    assert evaluate(product([])) == I
    t = product([Leaf(Sj(1)), Leaf(Sj(2)), Leaf(Sj(3))])
    assert t == Mul(Leaf(Sj(1)), Mul(Leaf(Sj(2)), Leaf(Sj(3))))


def test_deep_tree():
    t = Leaf(Sj(1))
    for _ in range(5000):
        t = Mul(t, Leaf(Sj(1)))
    assert evaluate(t) == Sj(1, 5001).matrix()


def test_from_json_rejects():
    with pytest.raises(ValueError):
        from_json({"leaf": {"kind": "nope"}, "mul": []})
    with pytest.raises(ValueError):
        from_json({"twig": {}})
