from math import gcd, prod
from functools import reduce

import pytest
from hypothesis import given, settings, strategies as st

from zornloop.errors import NotCoprime, NotInvertible, NotUnimodular
from zornloop.ring import (Modulus, crt, ext_gcd, factor_int, is_prime, mod_inv,
                           unimodular_shift, unit_shift, vec_ext_gcd, zigzag)

ints = st.integers(-10 ** 30, 10 ** 30)


@pytest.mark.parametrize("a, b, expected", [
    ((6, 4), None, (2, 1, -1)),
    ((0, 0), None, (0, 0, 0)),
    ((3, 7), None, (1, -2, 1)),
    ((4, 6), None, (2, -1, 1)),
    ((3, 3), None, (3, 1, 0)),
])
def test_ext_gcd_examples(a, b, expected):
    assert ext_gcd(*a) == expected
    g, x, y = expected
    assert a[0] * x + a[1] * y == g


@given(ints, ints)
def test_ext_gcd_bezout(a, b):
    g, x, y = ext_gcd(a, b)
    assert g == gcd(a, b) >= 0
    assert a * x + b * y == g


@given(st.lists(st.integers(-10 ** 6, 10 ** 6), min_size=1, max_size=5))
def test_vec_ext_gcd(values):
    g, coeffs = vec_ext_gcd(values)
    assert g == reduce(gcd, values, 0)
    assert sum(c * v for c, v in zip(coeffs, values)) == g


@pytest.mark.parametrize("a, m, expected", [(3, 5, 2), (1, 7, 1), (8, 15, 2), (5, 1, 0)])
def test_mod_inv_examples(a, m, expected):
    assert mod_inv(a, m) == expected


def test_mod_inv_exhaustive_oracle():
    # exhaustive search is the oracle
    for m in range(2, 40):
        for a in range(m):
            hits = [b for b in range(m) if a * b % m == 1]
            if hits:
                assert mod_inv(a, m) == hits[0]
            else:
                with pytest.raises(NotInvertible):
                    mod_inv(a, m)


@pytest.mark.parametrize("n, expected", [
    (1, []), (12, [(2, 2), (3, 1)]), (360, [(2, 3), (3, 2), (5, 1)]), (97, [(97, 1)]),
])
def test_factor_int_examples(n, expected):
    assert factor_int(n) == expected


def test_factor_int_round_trip():
    for n in range(1, 10 ** 5 + 1):
        fac = factor_int(n)
        assert prod(p ** k for p, k in fac) == n
        assert all(is_prime(p) for p, _ in fac)
        assert [p for p, _ in fac] == sorted({p for p, _ in fac})


@pytest.mark.parametrize("residues, expected", [
    ([(1, 2), (2, 3)], (5, 6)),
    ([(0, 5)], (0, 5)),
    ([(1, 2), (2, 3), (3, 5)], (23, 30)),
])
def test_crt_examples(residues, expected):
    assert crt(residues) == expected


def test_crt_not_coprime():
    with pytest.raises(NotCoprime):
        crt([(1, 4), (1, 6)])


@settings(max_examples=300)
@given(st.lists(st.integers(1, 10 ** 6), min_size=1, max_size=4), st.data())
def test_crt_random(mods, data):
    # keep only a pairwise coprime subset
    chosen = []
    for m in mods:
        if all(gcd(m, c) == 1 for c in chosen):
            chosen.append(m)
    res = [(data.draw(st.integers(-10 ** 9, 10 ** 9)), m) for m in chosen]
    r, M = crt(res)
    assert M == prod(chosen) and 0 <= r < M
    assert all((r - ri) % mi == 0 for ri, mi in res)


@pytest.mark.parametrize("args, expected", [
    ((4, 1, 2, 2), (0, 0)),
    ((5, 0, 1, 0), (1, 0)),
    ((6, 3, 2, 0), (1, 0)),
])
def test_unimodular_shift_examples(args, expected):
    assert unimodular_shift(*args) == expected
    a, u1, v2, v3 = args
    t, s = expected
    assert gcd(u1 + v2 * t + v3 * s, a) == 1


def test_unimodular_shift_rejects():
    with pytest.raises(NotUnimodular):
        unimodular_shift(6, 2, 4, 0)


def test_unimodular_shift_random():
    import random
    rng = random.Random(1)
    done = 0
    while done < 10 ** 4:
        a = rng.choice([-1, 1]) * rng.randint(1, 10 ** 6)
        u1, v2, v3 = (rng.randint(-10 ** 6, 10 ** 6) for _ in range(3))
        if reduce(gcd, (u1, v2, v3, a)) != 1:
            continue
        t, s = unimodular_shift(a, u1, v2, v3)
        assert gcd(u1 + v2 * t + v3 * s, a) == 1
        done += 1


def test_unimodular_shift_is_first_in_search_order():
    # oracle: scan rings of growing max-norm, zigzag-lexicographic inside a ring
    order = list(zigzag(6))
    for a in range(2, 13):
        for u1 in range(a):
            for v2 in range(a):
                v3 = 1
                if reduce(gcd, (u1, v2, v3, a)) != 1:
                    continue
                want = None
                for r in range(7):
                    for t in order:
                        for s in order:
                            if max(abs(t), abs(s)) == r and gcd(u1 + v2 * t + v3 * s, a) == 1:
                                want = (t, s)
                                break
                        if want:
                            break
                    if want:
                        break
                assert unimodular_shift(a, u1, v2, v3) == want


def test_unit_shift():
    assert unit_shift(2, 1, 3) == 0
    t = unit_shift(3, 2, 3)
    assert gcd(3 - t * 2, 3) == 1
    with pytest.raises(NotUnimodular):
        unit_shift(2, 4, 6)


def test_zigzag():
    assert list(zigzag(2)) == [0, 1, -1, 2, -2]


def test_modulus():
    assert Modulus(5).reduce(-1) == 4
    assert Modulus(0).reduce(-1) == -1
    assert Modulus(0).is_unit(-1) and not Modulus(0).is_unit(2)
    assert Modulus(1).is_unit(0)
    with pytest.raises(ValueError):
        Modulus(-1)
