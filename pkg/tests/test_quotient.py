import numpy as np
import pytest

import oracles
from zornloop.errors import NotCoprime, NotDivisor, TooLarge
from zornloop.floop import normality_check
from zornloop.quotient import (count_sll, crt_iso_check, enumerate_sll, index_gamma,
                               kernel_subloop, whole)
from zornloop.zorn import I, S1, T1, ZornMatrix, zinv, zmul


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 120), (3, 2160), (4, 15360), (5, 78000),
                                         (6, 259200)])
def test_index_gamma_examples(n, expected):
    assert index_gamma(n) == expected


def test_index_gamma_formula_oracle():
    for n in range(1, 300):
        assert index_gamma(n) == oracles.index_formula(n)
    assert index_gamma(10 ** 6) == oracles.index_formula(10 ** 6)


def test_index_gamma_multiplicative():
    from math import gcd
    for a in range(1, 40):
        for b in range(1, 40):
            if gcd(a, b) == 1:
                assert index_gamma(a * b) == index_gamma(a) * index_gamma(b)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_enumeration_matches_brute_force(m):
    L = enumerate_sll(m)
    got = sorted(L.element(i).astuple() for i in range(len(L)))
    assert got == oracles.all_sll(m)


def test_counts_up_to_nine():
    for m in range(1, 10):
        assert count_sll(m) == index_gamma(m)


def test_identity_first_and_lookup():
    for m in (2, 5, 6):
        L = enumerate_sll(m)
        assert L.element(0) == ZornMatrix.identity(m)
        for i in (0, 1, len(L) // 2, len(L) - 1):
            assert L.index(L.element(i)) == i
        assert L.index(S1) == L.index(ZornMatrix(1, (1, 0, 0), (0, 0, 0), 1, m))
        with pytest.raises(KeyError):
            L.index(ZornMatrix(2, (0, 0, 0), (0, 0, 0), 1, m))


@pytest.mark.parametrize("m", [3, 4, 6])
def test_multiplication_matches_oracle(m):
    L = enumerate_sll(m)
    rng = np.random.default_rng(m)
    I_, J = rng.integers(0, len(L), (2, 10 ** 5))
    P = L.mul_many(I_, J)
    assert (P >= 0).all()  # closed under the product
    for k in range(0, 10 ** 5, 97):
        want = oracles.mul(L.element(I_[k]).astuple(), L.element(J[k]).astuple(), m)
        assert L.element(P[k]).astuple() == want


def test_inverse_table():
    L = enumerate_sll(3)
    inv = L.inv
    for i in range(len(L)):
        assert L.mul(i, inv[i]) == 0 == L.mul(inv[i], i)
    assert L.element(inv[L.index(T1)]) == zinv(T1.__class__(0, (1, 0, 0), (-1, 0, 0), 0, 3))


def test_power():
    L = enumerate_sll(5)
    i = L.index(S1)
    assert L.element(L.power(i, 7)) == ZornMatrix(1, (7, 0, 0), (0, 0, 0), 1, 5)
    assert L.power(i, 5) == 0 and L.power(i, -1) == L.inv[i]


def test_crt_iso():
    assert crt_iso_check(2, 3)
    assert crt_iso_check(1, 5)
    with pytest.raises(NotCoprime):
        crt_iso_check(2, 4)


def test_caps():
    with pytest.raises(TooLarge):
        enumerate_sll(11)
    with pytest.raises(TooLarge):
        enumerate_sll(35)


def test_kernel_examples():
    L4 = enumerate_sll(4)
    K = kernel_subloop(L4, 4)
    assert list(K.members) == [0]
    assert len(kernel_subloop(L4, 2)) == 128
    L6 = enumerate_sll(6)
    assert kernel_subloop(L6, 1) == whole(L6) and len(kernel_subloop(L6, 1)) == 259200
    with pytest.raises(NotDivisor):
        kernel_subloop(L4, 3)


def test_kernel_sizes_and_closure():
    for m in range(1, 7):
        L = enumerate_sll(m)
        for d in range(1, m + 1):
            if m % d:
                continue
            K = kernel_subloop(L, d)
            assert len(K) == index_gamma(m) // index_gamma(d)
            # direct filter oracle
            want = [i for i in range(len(L))
                    if all(c % d == t % d for c, t in zip(L.element(i).astuple(),
                                                          (1, 0, 0, 0, 0, 0, 0, 1)))] \
                if len(L) <= 20000 else None
            if want is not None:
                assert list(K.members) == want
            mem = K.members[:200]
            prods = L.mul_many(mem[:, None], mem[None, :]).ravel()
            assert np.isin(prods, K.members).all()
            assert np.isin(L.inv[K.members], K.members).all()


@pytest.mark.parametrize("m, d", [(2, 2), (3, 3), (4, 2), (4, 4), (5, 5), (6, 2), (6, 3)])
def test_kernels_are_normal(m, d):
    L = enumerate_sll(m)
    assert normality_check(L, kernel_subloop(L, d))


def test_reduction_indices():
    L4, L2 = enumerate_sll(4), enumerate_sll(2)
    r = L4.reduction_indices(L2)
    for i in range(0, len(L4), 101):
        A = L4.element(i)
        assert L2.element(r[i]) == ZornMatrix(A.a, A.x, A.y, A.b, 2)
    with pytest.raises(NotDivisor):
        L4.reduction_indices(enumerate_sll(3))
