"""Subloop analysis inside a finite loop SLL(2, Z/mZ).

Subloops are ``SubloopSet`` objects holding sorted element indices of their
parent ``FiniteLoop``.  Most checks accept either the whole loop or a
subloop as the ambient loop.  Every scan runs in a compiled kernel, and
witnesses come back in canonical (index) order.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Union

import numpy as np

from . import _kernels as K
from .errors import LagrangeFails, NotDivisor, PreconditionViolated, TooLarge
from .quotient import FiniteLoop, SubloopSet, enumerate_sll, kernel_subloop, whole
from .zorn import LowerElementary, UpperElementary, ZornMatrix

__all__ = [
    "CheckResult", "SubloopSet", "closure", "coset", "lagrange_check",
    "index_or_cosets", "normality_check", "derived_subloop", "power_closure",
    "gamma_ns_image", "normal_closure", "delta_image", "generating_set",
]

TRIPLE_BUDGET = 3 * 10 ** 8
ROW_BUDGET = 4 * 10 ** 7
EPOCH = 10 ** 5
QUIET_EPOCHS = 10

Ambient = Union[FiniteLoop, SubloopSet]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a property check; falsy when a witness was found."""
    ok: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.ok


def _index(L: FiniteLoop, g) -> int:
    if isinstance(g, ZornMatrix):
        return L.index(g)
    g = int(g)
    if not 0 <= g < len(L):
        raise IndexError(f"element index {g} outside loop of order {len(L)}")
    return g


def _indices(L: FiniteLoop, seed: Iterable) -> np.ndarray:
    return np.array([_index(L, g) for g in seed], dtype=np.int64)


def _split(A: Ambient) -> tuple[FiniteLoop, np.ndarray]:
    if isinstance(A, SubloopSet):
        return A.parent, A.members
    return A, np.arange(len(A), dtype=np.int64)


def _positions(L: FiniteLoop, amb: np.ndarray) -> np.ndarray:
    pos = np.full(len(L), -1, np.int64)
    pos[amb] = np.arange(len(amb), dtype=np.int64)
    return pos


def _check_sub(L: FiniteLoop, amb: np.ndarray, H: SubloopSet) -> None:
    if H.parent is not L:
        raise PreconditionViolated("subloop belongs to a different loop")
    if not H.certified:
        raise PreconditionViolated("subloop is not certified closed")
    if not np.isin(H.members, amb).all():
        raise PreconditionViolated("subloop is not contained in the ambient loop")


def _grow_from(L: FiniteLoop, gens: list[int], start: np.ndarray, seed: np.ndarray) -> tuple[list[int], np.ndarray]:
    """Add seed elements as generators until all of them lie in the span."""
    E, m, codes, lut = L.kernel_args()
    mem = start
    inside = np.zeros(len(L), np.bool_)
    inside[mem] = True
    for g in seed:
        if inside[g]:
            continue
        gens.append(int(g))
        mem = K.grow(E, m, codes, lut, np.array(gens, np.int64), mem)
        inside[mem] = True
    return gens, mem


def closure(L: FiniteLoop, seed: Iterable) -> SubloopSet:
    """Smallest subloop containing ``seed`` (indices or matrices) and I."""
    _, mem = _grow_from(L, [], np.zeros(1, np.int64), _indices(L, seed))
    return SubloopSet(L, mem)


def generating_set(A: Ambient) -> list[int]:
    """A small list of element indices generating the ambient loop."""
    L, amb = _split(A)
    if len(amb) == len(L):
        cand = np.array(L.generators(), np.int64)
        gens, mem = _grow_from(L, [], np.zeros(1, np.int64), cand)
        if len(mem) == len(L):
            return gens
    gens, mem = _grow_from(L, [], np.zeros(1, np.int64), amb)
    return gens


def coset(L: FiniteLoop, H: SubloopSet, x, side: str = "right") -> np.ndarray:
    """Sorted indices of ``xH`` (side="left") or ``Hx`` (side="right")."""
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    xi = _index(L, x)
    if side == "left":
        return np.unique(L.mul_many(xi, H.members))
    return np.unique(L.mul_many(H.members, xi))


def _rows(L: FiniteLoop, H: SubloopSet, amb: np.ndarray, left: bool) -> np.ndarray:
    if len(H) * len(amb) > ROW_BUDGET:
        raise TooLarge(f"coset table of {len(amb)} x {len(H)} exceeds {ROW_BUDGET} entries")
    E, m, codes, lut = L.kernel_args()
    return K.coset_rows(E, m, codes, lut, H.members, amb, left)


def _class_ids(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Class id per row and the position of each class's first row."""
    rows = np.ascontiguousarray(rows)
    keys = rows.view(np.dtype((np.void, rows.itemsize * rows.shape[1]))).ravel()
    _, first, cid = np.unique(keys, return_index=True, return_inverse=True)
    return cid.reshape(-1).astype(np.int64), first.astype(np.int64)


def _mats(L: FiniteLoop, idx) -> list:
    return [L.element(int(i)).to_json() for i in idx]


def _right_cosets(A: Ambient, H: SubloopSet):
    L, amb = _split(A)
    _check_sub(L, amb, H)
    rows = _rows(L, H, amb, left=False)
    cid, first = _class_ids(rows)
    return L, amb, rows, cid, first


def _lagrange(A: Ambient, H: SubloopSet) -> tuple[CheckResult, int | None]:
    """The Lagrange check plus the right coset count when it passes."""
    L, amb = _split(A)
    _check_sub(L, amb, H)
    if len(H) * len(amb) > ROW_BUDGET and _is_normal(L, amb, H):
        # normal subloops have the property; cosets then all have |H| elements
        return CheckResult(True), len(amb) // len(H)
    L, amb, rows, cid, first = _right_cosets(A, H)
    E, m, codes, lut = L.kernel_args()
    hi, xi = K.lagrange_scan(E, m, codes, lut, H.members, amb, _positions(L, amb), cid)
    if hi < 0:
        return CheckResult(True), len(first)
    h, x = int(H.members[hi]), int(amb[xi])
    hx = L.mul(h, x)
    return CheckResult(False, {
        "h": L.element(h).to_json(),
        "x": L.element(x).to_json(),
        "coset_hx": _mats(L, coset(L, H, hx)),
        "coset_x": _mats(L, rows[xi]),
    }), None


def lagrange_check(A: Ambient, H: SubloopSet) -> CheckResult:
    """Whether ``H(hx) == Hx`` for every h in H and x in the ambient loop.

    The witness is the first failing (h, x) in index order together with
    both cosets.  When the coset table is too large to hold, a normal H is
    accepted without it, since normal subloops always have the property.
    """
    return _lagrange(A, H)[0]


def index_or_cosets(A: Ambient, H: SubloopSet) -> int:
    """Number of distinct right cosets of H; ``LagrangeFails`` if they overlap."""
    res, count = _lagrange(A, H)
    if not res:
        raise LagrangeFails("right cosets do not partition the loop", witness=res.witness)
    n = len(_split(A)[1])
    if count * len(H) != n:
        raise AssertionError(f"{count} cosets of size {len(H)} do not cover {n} elements")
    return count


def _translations(L: FiniteLoop, gens) -> np.ndarray:
    E, m, codes, lut = L.kernel_args()
    return np.stack([K.translation_perm(E, m, codes, lut, g, left)
                     for g in gens for left in (True, False)])


def _normal_block(L: FiniteLoop, amb: np.ndarray, seed: np.ndarray) -> np.ndarray:
    """Smallest normal subloop of the ambient loop containing ``seed``.

    This is the class of I in the finest partition that joins I with the
    seed and is preserved by translations.  Translations by a generating
    set generate all translations, and they map the ambient loop to itself,
    so the class stays inside it.
    """
    A = L if len(amb) == len(L) else SubloopSet(L, amb)
    return K.congruence_block(_translations(L, generating_set(A)), seed)


def _is_normal(L: FiniteLoop, amb: np.ndarray, H: SubloopSet) -> bool:
    return len(_normal_block(L, amb, H.members)) == len(H)


def normality_check(A: Ambient, H: SubloopSet) -> CheckResult:
    """Whether xH = Hx, (xy)H = x(yH) and H(xy) = (Hx)y for all x, y.

    These laws say H is the class of I in a partition kept by every
    translation, so H passes exactly when its normal closure is H itself.
    On failure the coset laws are scanned in canonical order for the first
    (x, y) that breaks one.  If the coset table is too large for that
    scan, the witness is an element of the normal closure outside H.
    """
    L, amb = _split(A)
    _check_sub(L, amb, H)
    block = _normal_block(L, amb, H.members)
    if len(block) == len(H):
        return CheckResult(True)

    def fail(cond, x, y):
        return CheckResult(False, {
            "condition": cond,
            "x": L.element(int(x)).to_json(),
            "y": None if y is None else L.element(int(y)).to_json(),
        })

    if len(H) * len(amb) > ROW_BUDGET:
        outside = np.setdiff1d(block, H.members)
        return fail("normal closure", outside[0], None)
    E, m, codes, lut = L.kernel_args()
    rl = _rows(L, H, amb, left=True)
    rr = _rows(L, H, amb, left=False)
    bad = np.nonzero((rl != rr).any(axis=1))[0]
    if len(bad):
        return fail("xH=Hx", amb[bad[0]], None)
    pos = _positions(L, amb)
    for left, cond, rows in ((True, "(xy)H=x(yH)", rl), (False, "H(xy)=(Hx)y", rr)):
        x, y = K.coset_product_scan(E, m, codes, lut, H.members, amb, pos, rows, left)
        if x >= 0:
            return fail(cond, x, y)
    raise AssertionError("normal closure is larger than H but no coset law fails")


def derived_subloop(L: FiniteLoop, S: SubloopSet) -> SubloopSet:
    """Subloop generated by all commutators and associators of elements of S.

    Triples are exhausted when ``|S|**3 <= TRIPLE_BUDGET``.  Otherwise random
    triples are drawn in epochs until ``QUIET_EPOCHS`` epochs in a row add
    nothing, and the result is marked ``"partial"`` (a lower bound).
    """
    _check_sub(L, np.arange(len(L)), S)
    E, m, codes, lut = L.kernel_args()
    inv = L.inv
    n = len(S)
    exhaustive = n ** 3 <= TRIPLE_BUDGET
    hits = np.nonzero(K.derived_hits(E, m, codes, lut, inv, S.members, exhaustive))[0]
    gens, mem = _grow_from(L, [], np.zeros(1, np.int64), hits)
    if exhaustive:
        return SubloopSet(L, mem)
    rng = np.random.default_rng(0)
    inside = np.zeros(len(L), np.bool_)
    inside[mem] = True
    quiet = 0
    while quiet < QUIET_EPOCHS:
        A, B, C = (S.members[rng.integers(0, n, EPOCH)] for _ in range(3))
        new = np.unique(K.sampled_associators(E, m, codes, lut, inv, A, B, C))
        new = new[~inside[new]]
        if len(new):
            gens, mem = _grow_from(L, gens, mem, new)
            inside[mem] = True
            quiet = 0
        else:
            quiet += 1
    return SubloopSet(L, mem, status="partial")


def power_closure(L: FiniteLoop, S: SubloopSet, s: int) -> SubloopSet:
    """Subloop generated by the s-th powers of the elements of S."""
    if s < 1:
        raise ValueError(f"power must be >= 1, got {s}")
    _check_sub(L, np.arange(len(L)), S)
    E, m, codes, lut = L.kernel_args()
    return closure(L, np.unique(K.powers(E, m, codes, lut, S.members, s)))


def gamma_ns_image(m: int, n: int, s: int) -> SubloopSet:
    """Image mod m of the subloop generated by commutators, associators and
    s-th powers of Gamma(n).

    Inherits the ``"partial"`` status of the derived subloop when sampling
    was needed.
    """
    if n < 1 or m % n:
        raise NotDivisor(f"{n} does not divide {m}")
    if s < 1:
        raise ValueError(f"power must be >= 1, got {s}")
    L = enumerate_sll(m)
    Kn = kernel_subloop(L, n)
    D = derived_subloop(L, Kn)
    E, mm, codes, lut = L.kernel_args()
    P = K.powers(E, mm, codes, lut, Kn.members, s)
    res = closure(L, np.union1d(D.members, P))
    return SubloopSet(L, res.members, status=D.status)


def normal_closure(L: FiniteLoop, seed: Iterable) -> SubloopSet:
    """Smallest normal subloop of L containing ``seed``."""
    return SubloopSet(L, _normal_block(L, np.arange(len(L), dtype=np.int64), _indices(L, seed)))


def delta_image(L: FiniteLoop, q: int) -> SubloopSet:
    """Image of Delta(q): normal closure of the unipotents with entries in qZ."""
    if q < 1:
        raise ValueError(f"level must be >= 1, got {q}")
    g = gcd(q, L.m)
    steps = range(0, L.m, g)
    seed = []
    for v in ((i, j, k) for i in steps for j in steps for k in steps):
        seed.append(UpperElementary(v).matrix(L.m))
        seed.append(LowerElementary(v).matrix(L.m))
    return normal_closure(L, seed)
