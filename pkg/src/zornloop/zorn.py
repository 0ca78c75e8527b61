"""The Zorn vector-matrix algebra over Z and Z/mZ.

An element is a 2x2 array ``[[a, x], [y, b]]`` with scalar diagonal and
3-vector off-diagonal entries.  The product uses dot and cross products
(right-handed, ``e1 x e2 = e3``) and is alternative but not associative.
Invertible elements form the Moufang loop GLL(2, R); determinant-1
elements form SLL(2, R).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import NamedTuple, Sequence, Union

from .errors import InvalidSL2, ModulusMismatch, NotInvertible
from .ring import Modulus, mod_inv


class Vec3(NamedTuple):
    c1: int
    c2: int
    c3: int

    def dot(self, other: Sequence[int]) -> int:
        return self[0] * other[0] + self[1] * other[1] + self[2] * other[2]

    def cross(self, other: Sequence[int]) -> "Vec3":
        x1, x2, x3 = self
        y1, y2, y3 = other
        return Vec3(x2 * y3 - x3 * y2, x3 * y1 - x1 * y3, x1 * y2 - x2 * y1)

    def scale(self, k: int) -> "Vec3":
        return Vec3(k * self[0], k * self[1], k * self[2])

    def __add__(self, other):  # componentwise, unlike tuple concatenation
        return Vec3(self[0] + other[0], self[1] + other[1], self[2] + other[2])

    def __sub__(self, other):
        return Vec3(self[0] - other[0], self[1] - other[1], self[2] - other[2])

    def __neg__(self):
        return Vec3(-self[0], -self[1], -self[2])

    def __mul__(self, k):  # scalar multiple, not tuple repetition
        return self.scale(k)

    __rmul__ = __mul__

    def reduce(self, m: int) -> "Vec3":
        return Vec3(self[0] % m, self[1] % m, self[2] % m) if m else self


ZERO = Vec3(0, 0, 0)


def e(j: int, k: int = 1) -> Vec3:
    """``k`` times the j-th standard basis vector (1-based)."""
    if j not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {j}")
    return Vec3(*(k if i == j else 0 for i in (1, 2, 3)))


@dataclass(frozen=True, slots=True)
class ZornMatrix:
    a: int
    x: Vec3
    y: Vec3
    b: int
    mod: int = 0

    def __post_init__(self):
        m = self.mod
        if m < 0:
            raise ValueError("modulus must be >= 0")
        x, y = self.x, self.y
        if m:
            object.__setattr__(self, "a", self.a % m)
            object.__setattr__(self, "b", self.b % m)
            x = (x[0] % m, x[1] % m, x[2] % m)
            y = (y[0] % m, y[1] % m, y[2] % m)
        if type(x) is not Vec3:
            x = Vec3(*x)
        if type(y) is not Vec3:
            y = Vec3(*y)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def identity(cls, mod: int = 0) -> "ZornMatrix":
        return cls(1, ZERO, ZERO, 1, mod)

    @classmethod
    def zero(cls, mod: int = 0) -> "ZornMatrix":
        return cls(0, ZERO, ZERO, 0, mod)

    def astuple(self) -> tuple[int, ...]:
        """Flat ``(a, x1, x2, x3, y1, y2, y3, b)``."""
        return (self.a, *self.x, *self.y, self.b)

    def is_identity(self) -> bool:
        return self == ZornMatrix.identity(self.mod)

    def to_json(self) -> dict:
        return {"a": self.a, "x": list(self.x), "y": list(self.y), "b": self.b,
                "mod": self.mod}

    @classmethod
    def from_json(cls, obj: dict) -> "ZornMatrix":
        keys = {"a", "x", "y", "b", "mod"}
        if set(obj) != keys:
            raise ValueError(f"matrix JSON needs exactly the keys {sorted(keys)}")
        x, y = obj["x"], obj["y"]
        vals = [obj["a"], obj["b"], obj["mod"], *x, *y]
        if len(x) != 3 or len(y) != 3 or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in vals):
            raise ValueError("matrix JSON entries must be integers, vectors of length 3")
        return cls(obj["a"], Vec3(*x), Vec3(*y), obj["b"], obj["mod"])

    def __mul__(self, other: "ZornMatrix") -> "ZornMatrix":
        return zmul(self, other)

    def __add__(self, other: "ZornMatrix") -> "ZornMatrix":
        return zadd(self, other)

    def __neg__(self) -> "ZornMatrix":
        return zneg(self)

    def __str__(self) -> str:
        return f"Z[{self.a}|{tuple(self.x)}|{tuple(self.y)}|{self.b}]" + \
            (f" mod {self.mod}" if self.mod else "")


def _check(A: ZornMatrix, B: ZornMatrix) -> int:
    if A.mod != B.mod:
        raise ModulusMismatch(f"moduli differ: {A.mod} vs {B.mod}")
    return A.mod


def zmul(A: ZornMatrix, B: ZornMatrix) -> ZornMatrix:
    m = _check(A, B)
    a1, (x11, x12, x13), (y11, y12, y13), b1 = A.a, A.x, A.y, A.b
    a2, (x21, x22, x23), (y21, y22, y23), b2 = B.a, B.x, B.y, B.b
    return ZornMatrix(
        a1 * a2 + x11 * y21 + x12 * y22 + x13 * y23,
        (a1 * x21 + b2 * x11 - (y12 * y23 - y13 * y22),
         a1 * x22 + b2 * x12 - (y13 * y21 - y11 * y23),
         a1 * x23 + b2 * x13 - (y11 * y22 - y12 * y21)),
        (a2 * y11 + b1 * y21 + (x12 * x23 - x13 * x22),
         a2 * y12 + b1 * y22 + (x13 * x21 - x11 * x23),
         a2 * y13 + b1 * y23 + (x11 * x22 - x12 * x21)),
        b1 * b2 + y11 * x21 + y12 * x22 + y13 * x23,
        m,
    )


def zadd(A: ZornMatrix, B: ZornMatrix) -> ZornMatrix:
    m = _check(A, B)
    return ZornMatrix(A.a + B.a, A.x + B.x, A.y + B.y, A.b + B.b, m)


def zneg(A: ZornMatrix) -> ZornMatrix:
    return ZornMatrix(-A.a, -A.x, -A.y, -A.b, A.mod)


def zdet(A: ZornMatrix) -> int:
    d = A.a * A.b - A.x.dot(A.y)
    return d % A.mod if A.mod else d


def is_gll(A: ZornMatrix) -> bool:
    return Modulus(A.mod).is_unit(zdet(A))


def is_sll(A: ZornMatrix) -> bool:
    return zdet(A) == (1 % A.mod if A.mod else 1)


def zinv(A: ZornMatrix) -> ZornMatrix:
    d = zdet(A)
    if A.mod:
        if gcd(d, A.mod) != 1:
            raise NotInvertible(f"det {d} is not a unit modulo {A.mod}", witness=A.to_json())
        k = mod_inv(d, A.mod)
    else:
        if d not in (1, -1):
            raise NotInvertible(f"det {d} is not a unit of Z", witness=A.to_json())
        k = d
    return ZornMatrix(k * A.b, A.x.scale(-k), A.y.scale(-k), k * A.a, A.mod)


def reduce_mod(A: ZornMatrix, m: int) -> ZornMatrix:
    if m < 1:
        raise ValueError(f"reduction modulus must be >= 1, got {m}")
    if A.mod and A.mod % m:
        raise ModulusMismatch(f"cannot reduce a mod-{A.mod} matrix modulo {m}")
    return ZornMatrix(A.a, A.x, A.y, A.b, m)


def gamma_membership(A: ZornMatrix, n: int) -> bool:
    """Is ``A`` in the principal congruence subloop of level ``n``?"""
    return is_sll(A) and reduce_mod(A, n) == ZornMatrix.identity(n)


def commutator(A: ZornMatrix, B: ZornMatrix) -> ZornMatrix:
    """``((A*B)*A^-1)*B^-1``."""
    return zmul(zmul(zmul(A, B), zinv(A)), zinv(B))


def associator(A: ZornMatrix, B: ZornMatrix, C: ZornMatrix) -> ZornMatrix:
    """``((A*B)*C) * (A*(B*C))^-1``."""
    for M in (A, B, C):
        if not is_gll(M):
            raise NotInvertible("associator arguments must be invertible", witness=M.to_json())
    return zmul(zmul(zmul(A, B), C), zinv(zmul(A, zmul(B, C))))


def power(A: ZornMatrix, k: int) -> ZornMatrix:
    """``A**k``; unambiguous because one element generates an associative subloop."""
    if k < 0:
        A, k = zinv(A), -k
    result = ZornMatrix.identity(A.mod)
    sq = A
    while k:
        if k & 1:
            result = zmul(result, sq)
        sq = zmul(sq, sq)
        k >>= 1
    return result


def moufang_report(A: ZornMatrix, B: ZornMatrix, C: ZornMatrix) -> dict[str, bool]:
    for M in (A, B, C):
        if not is_gll(M):
            raise NotInvertible("moufang_report arguments must be invertible",
                                witness=M.to_json())
    AB = zmul(A, B)
    return {
        "left_alternative": zmul(zmul(A, A), B) == zmul(A, AB),
        "right_alternative": zmul(A, zmul(B, B)) == zmul(AB, B),
        "flexible": zmul(AB, A) == zmul(A, zmul(B, A)),
        "moufang": zmul(zmul(AB, A), C) == zmul(A, zmul(B, zmul(A, C))),
    }


# -- named generators ------------------------------------------------------

@dataclass(frozen=True)
class UpperElementary:
    v: Vec3

    def __post_init__(self):
        object.__setattr__(self, "v", Vec3(*self.v))

    def matrix(self, mod: int = 0) -> ZornMatrix:
        return ZornMatrix(1, self.v, ZERO, 1, mod)

    def to_json(self) -> dict:
        return {"kind": "upper", "v": list(self.v)}


@dataclass(frozen=True)
class LowerElementary:
    v: Vec3

    def __post_init__(self):
        object.__setattr__(self, "v", Vec3(*self.v))

    def matrix(self, mod: int = 0) -> ZornMatrix:
        return ZornMatrix(1, ZERO, self.v, 1, mod)

    def to_json(self) -> dict:
        return {"kind": "lower", "v": list(self.v)}


@dataclass(frozen=True)
class Sj:
    """``[[1, a e_j], [0, 1]]``; ``Sj(j, 1)`` is the generator S_j."""
    j: int
    a: int = 1

    def matrix(self, mod: int = 0) -> ZornMatrix:
        return ZornMatrix(1, e(self.j, self.a), ZERO, 1, mod)

    def to_json(self) -> dict:
        return {"kind": "S", "j": self.j, "a": self.a}


@dataclass(frozen=True)
class Tj:
    j: int

    def matrix(self, mod: int = 0) -> ZornMatrix:
        return ZornMatrix(0, e(self.j), e(self.j, -1), 0, mod)

    def to_json(self) -> dict:
        return {"kind": "T", "j": self.j}


@dataclass(frozen=True)
class Uj:
    j: int

    def matrix(self, mod: int = 0) -> ZornMatrix:
        return ZornMatrix(0, e(self.j), e(self.j, -1), 1, mod)

    def to_json(self) -> dict:
        return {"kind": "U", "j": self.j}


@dataclass(frozen=True)
class EmbeddedSL2:
    """``[[p, q], [r, s]]`` in SL(2, Z) placed along axis ``j``."""
    j: int
    m: tuple[tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        (p, q), (r, s) = self.m
        object.__setattr__(self, "m", ((p, q), (r, s)))
        if p * s - q * r != 1:
            raise InvalidSL2(f"determinant of {self.m} is {p * s - q * r}, not 1")
        if self.j not in (1, 2, 3):
            raise ValueError(f"axis must be 1, 2 or 3, got {self.j}")

    def matrix(self, mod: int = 0) -> ZornMatrix:
        (p, q), (r, s) = self.m
        return ZornMatrix(p, e(self.j, q), e(self.j, r), s, mod)

    def to_json(self) -> dict:
        return {"kind": "sl2", "j": self.j, "m": [list(row) for row in self.m]}


GeneratorTag = Union[UpperElementary, LowerElementary, Sj, Tj, Uj, EmbeddedSL2]


def generator(tag: GeneratorTag, mod: int = 0) -> ZornMatrix:
    return tag.matrix(mod)


def tag_from_json(obj: dict) -> GeneratorTag:
    kind = obj.get("kind")
    if kind == "upper":
        return UpperElementary(Vec3(*obj["v"]))
    if kind == "lower":
        return LowerElementary(Vec3(*obj["v"]))
    if kind == "S":
        return Sj(obj["j"], obj["a"])
    if kind == "T":
        return Tj(obj["j"])
    if kind == "U":
        return Uj(obj["j"])
    if kind == "sl2":
        (p, q), (r, s) = obj["m"]
        return EmbeddedSL2(obj["j"], ((p, q), (r, s)))
    raise ValueError(f"unknown generator kind {kind!r}")


I = ZornMatrix.identity()
S1, S2, S3 = (Sj(j).matrix() for j in (1, 2, 3))
T1, T2, T3 = (Tj(j).matrix() for j in (1, 2, 3))
U1, U2, U3 = (Uj(j).matrix() for j in (1, 2, 3))
