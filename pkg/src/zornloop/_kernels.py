"""Compiled inner loops for finite loops SLL(2, Z/mZ).

Elements live in an ``(N, 8)`` int8 array ``E`` with columns
``a, x1, x2, x3, y1, y2, y3, b``.  An element's code is the base-m number
with digits ``(a-1, x1, x2, x3, y1, y2, y3, b-1) mod m``, so the identity has
code 0 and sits at index 0 once codes are sorted.  ``lut`` is a dense
code -> index table, or empty, in which case lookups bisect ``codes``.
"""
import numpy as np
from numba import njit


@njit(cache=True, inline='always')
def encode(a, x1, x2, x3, y1, y2, y3, b, m):
    c = (a - 1) % m
    c = c * m + x1 % m
    c = c * m + x2 % m
    c = c * m + x3 % m
    c = c * m + y1 % m
    c = c * m + y2 % m
    c = c * m + y3 % m
    c = c * m + (b - 1) % m
    return c


@njit(cache=True, inline='always')
def lookup(code, codes, lut):
    if lut.shape[0] > 0:
        return np.int64(lut[code])
    k = np.searchsorted(codes, code)
    if k < codes.shape[0] and codes[k] == code:
        return np.int64(k)
    return np.int64(-1)


@njit(cache=True, inline='always')
def mul(E, m, codes, lut, i, j):
    # entries are in [0, m), so every product entry lies in [-(m-1)^2, 4(m-1)^2];
    # shifting by m^3 keeps it nonnegative and a multiple of m away from the true value
    a1 = np.int64(E[i, 0]); x11 = np.int64(E[i, 1]); x12 = np.int64(E[i, 2])
    x13 = np.int64(E[i, 3]); y11 = np.int64(E[i, 4]); y12 = np.int64(E[i, 5])
    y13 = np.int64(E[i, 6]); b1 = np.int64(E[i, 7])
    a2 = np.int64(E[j, 0]); x21 = np.int64(E[j, 1]); x22 = np.int64(E[j, 2])
    x23 = np.int64(E[j, 3]); y21 = np.int64(E[j, 4]); y22 = np.int64(E[j, 5])
    y23 = np.int64(E[j, 6]); b2 = np.int64(E[j, 7])
    sh = m * m * m
    a = a1 * a2 + x11 * y21 + x12 * y22 + x13 * y23 + sh - 1
    X1 = a1 * x21 + b2 * x11 - (y12 * y23 - y13 * y22) + sh
    X2 = a1 * x22 + b2 * x12 - (y13 * y21 - y11 * y23) + sh
    X3 = a1 * x23 + b2 * x13 - (y11 * y22 - y12 * y21) + sh
    Y1 = a2 * y11 + b1 * y21 + (x12 * x23 - x13 * x22) + sh
    Y2 = a2 * y12 + b1 * y22 + (x13 * x21 - x11 * x23) + sh
    Y3 = a2 * y13 + b1 * y23 + (x11 * x22 - x12 * x21) + sh
    b = b1 * b2 + y11 * x21 + y12 * x22 + y13 * x23 + sh - 1
    # v % m via a fixed-point reciprocal; exact because every v is below 2**16
    r = (np.int64(1) << 32) // m + 1
    c = a - ((a * r) >> 32) * m
    c = c * m + X1 - ((X1 * r) >> 32) * m
    c = c * m + X2 - ((X2 * r) >> 32) * m
    c = c * m + X3 - ((X3 * r) >> 32) * m
    c = c * m + Y1 - ((Y1 * r) >> 32) * m
    c = c * m + Y2 - ((Y2 * r) >> 32) * m
    c = c * m + Y3 - ((Y3 * r) >> 32) * m
    c = c * m + b - ((b * r) >> 32) * m
    return lookup(np.int64(c), codes, lut)


@njit(cache=True)
def mul_many(E, m, codes, lut, I, J):
    out = np.empty(I.shape[0], np.int64)
    for k in range(I.shape[0]):
        out[k] = mul(E, m, codes, lut, I[k], J[k])
    return out


@njit(cache=True)
def inverses(E, m, codes, lut):
    # det 1: inverse is [[b, -x], [-y, a]]
    N = E.shape[0]
    out = np.empty(N, np.int64)
    for i in range(N):
        out[i] = lookup(encode(np.int64(E[i, 7]), -np.int64(E[i, 1]), -np.int64(E[i, 2]),
                               -np.int64(E[i, 3]), -np.int64(E[i, 4]), -np.int64(E[i, 5]),
                               -np.int64(E[i, 6]), np.int64(E[i, 0]), m), codes, lut)
    return out


@njit(cache=True)
def power(E, m, codes, lut, i, s):
    result = np.int64(0)
    sq = np.int64(i)
    while s > 0:
        if s & 1:
            result = mul(E, m, codes, lut, result, sq)
        sq = mul(E, m, codes, lut, sq, sq)
        s >>= 1
    return result


@njit(cache=True)
def grow(E, m, codes, lut, gens, start):
    """Orbit of ``start`` under left and right translation by ``gens``.

    In a Moufang loop L_{xy} = L_x R_x L_y R_x^-1 and R_{yx} = L_x R_x R_y L_x^-1,
    so translations by a generating set generate every translation of the
    subloop they span; the orbit of I is therefore that subloop.
    """
    N = codes.shape[0]
    inS = np.zeros(N, np.bool_)
    mem = np.empty(N, np.int64)
    cnt = 0
    for z in start:
        if not inS[z]:
            inS[z] = True
            mem[cnt] = z
            cnt += 1
    k = 0
    while k < cnt:
        g = mem[k]
        for t in gens:
            p = mul(E, m, codes, lut, t, g)
            if not inS[p]:
                inS[p] = True
                mem[cnt] = p
                cnt += 1
            q = mul(E, m, codes, lut, g, t)
            if not inS[q]:
                inS[q] = True
                mem[cnt] = q
                cnt += 1
        k += 1
    return np.sort(mem[:cnt])


@njit(cache=True)
def coset_rows(E, m, codes, lut, H, X, left):
    """Row k is the sorted coset ``X[k] H`` (left) or ``H X[k]`` (right)."""
    out = np.empty((X.shape[0], H.shape[0]), np.int32)
    for k in range(X.shape[0]):
        for l in range(H.shape[0]):
            if left:
                out[k, l] = mul(E, m, codes, lut, X[k], H[l])
            else:
                out[k, l] = mul(E, m, codes, lut, H[l], X[k])
        out[k].sort()
    return out


@njit(cache=True)
def lagrange_scan(E, m, codes, lut, H, amb, pos, cid):
    """First (h, x) with H(hx) != Hx, as positions in H and amb; (-1, -1) if none."""
    for hi in range(H.shape[0]):
        for xi in range(amb.shape[0]):
            z = mul(E, m, codes, lut, H[hi], amb[xi])
            if cid[pos[z]] != cid[xi]:
                return hi, xi
    return -1, -1


@njit(cache=True)
def _same(row, buf):
    for k in range(row.shape[0]):
        if row[k] != buf[k]:
            return False
    return True


@njit(cache=True)
def coset_product_scan(E, m, codes, lut, H, amb, pos, rows, left):
    """First (x, y) in canonical order violating a coset product law.

    left: (xy)H == x(yH) with ``rows`` the sorted left cosets zH;
    right: H(xy) == (Hx)y with ``rows`` the sorted right cosets Hz.
    """
    buf = np.empty(H.shape[0], np.int32)
    for xi in range(amb.shape[0]):
        x = amb[xi]
        for yi in range(amb.shape[0]):
            y = amb[yi]
            for l in range(H.shape[0]):
                if left:
                    buf[l] = mul(E, m, codes, lut, x, mul(E, m, codes, lut, y, H[l]))
                else:
                    buf[l] = mul(E, m, codes, lut, mul(E, m, codes, lut, H[l], x), y)
            buf.sort()
            if not _same(rows[pos[mul(E, m, codes, lut, x, y)]], buf):
                return x, y
    return -1, -1


@njit(cache=True)
def commutator(E, m, codes, lut, inv, a, b):
    ab = mul(E, m, codes, lut, a, b)
    return mul(E, m, codes, lut, mul(E, m, codes, lut, ab, inv[a]), inv[b])


@njit(cache=True)
def associator(E, m, codes, lut, inv, a, b, c):
    lhs = mul(E, m, codes, lut, mul(E, m, codes, lut, a, b), c)
    rhs = mul(E, m, codes, lut, a, mul(E, m, codes, lut, b, c))
    return mul(E, m, codes, lut, lhs, inv[rhs])


@njit(cache=True)
def derived_hits(E, m, codes, lut, inv, S, triples):
    """Mask of all commutators of pairs from S, and associators of triples if asked."""
    hit = np.zeros(codes.shape[0], np.bool_)
    n = S.shape[0]
    prod = np.empty((n, n), np.int64)
    for i in range(n):
        for j in range(n):
            prod[i, j] = mul(E, m, codes, lut, S[i], S[j])
    for i in range(n):
        for j in range(n):
            # [a, b] = ((ab) a^-1) b^-1
            hit[mul(E, m, codes, lut, mul(E, m, codes, lut, prod[i, j], inv[S[i]]), inv[S[j]])] = True
    if triples:
        for i in range(n):
            for j in range(n):
                ab = prod[i, j]
                for k in range(n):
                    lhs = mul(E, m, codes, lut, ab, S[k])
                    rhs = mul(E, m, codes, lut, S[i], prod[j, k])
                    hit[mul(E, m, codes, lut, lhs, inv[rhs])] = True
    return hit


@njit(cache=True)
def sampled_associators(E, m, codes, lut, inv, A, B, C):
    out = np.empty(A.shape[0], np.int64)
    for k in range(A.shape[0]):
        out[k] = associator(E, m, codes, lut, inv, A[k], B[k], C[k])
    return out


@njit(cache=True)
def powers(E, m, codes, lut, S, s):
    out = np.empty(S.shape[0], np.int64)
    for k in range(S.shape[0]):
        out[k] = power(E, m, codes, lut, S[k], s)
    return out


@njit(cache=True)
def translation_perm(E, m, codes, lut, g, left):
    N = codes.shape[0]
    out = np.empty(N, np.int64)
    for z in range(N):
        out[z] = mul(E, m, codes, lut, g, z) if left else mul(E, m, codes, lut, z, g)
    return out


@njit(cache=True)
def _find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


@njit(cache=True)
def congruence_block(perms, seed):
    """Class of index 0 in the finest partition invariant under ``perms`` joining 0 with seed."""
    N = perms.shape[1]
    parent = np.arange(N)
    qa = np.empty(N, np.int64)
    qb = np.empty(N, np.int64)
    head = 0
    tail = 0
    for s in seed:
        ra = _find(parent, 0)
        rb = _find(parent, s)
        if ra != rb:
            parent[rb] = ra
            qa[tail] = 0
            qb[tail] = s
            tail += 1
    while head < tail:
        a = qa[head]
        b = qb[head]
        head += 1
        for g in range(perms.shape[0]):
            ra = _find(parent, perms[g, a])
            rb = _find(parent, perms[g, b])
            if ra != rb:
                parent[rb] = ra
                qa[tail] = perms[g, a]
                qb[tail] = perms[g, b]
                tail += 1
    root = _find(parent, 0)
    out = np.empty(N, np.int64)
    cnt = 0
    for z in range(N):
        if _find(parent, z) == root:
            out[cnt] = z
            cnt += 1
    return out[:cnt]
