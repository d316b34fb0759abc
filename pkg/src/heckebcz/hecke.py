"""Group-theoretic data of the Hecke triangle group G_q acting on the plane."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import AlgNum, HeckeField, hecke_field, recurrence_polys

__all__ = [
    "PlaneVec",
    "Mat2",
    "HeckeContext",
    "make_context",
    "wedge",
    "dot",
    "qform",
]


class PlaneVec:
    """A plane vector with exact coordinates."""

    __slots__ = ("x", "y")

    def __init__(self, x: AlgNum, y: AlgNum):
        self.x = x
        self.y = y

    def __iter__(self):
        yield self.x
        yield self.y

    def __eq__(self, other):
        if not isinstance(other, PlaneVec):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        return f"PlaneVec({self.x!r}, {self.y!r})"

    def __add__(self, other):
        return PlaneVec(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return PlaneVec(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return PlaneVec(-self.x, -self.y)

    def scale(self, s) -> PlaneVec:
        return PlaneVec(self.x * s, self.y * s)

    def swap(self) -> PlaneVec:
        return PlaneVec(self.y, self.x)

    def to_float(self) -> tuple[float, float]:
        return float(self.x), float(self.y)

    def slope(self) -> AlgNum:
        return self.y / self.x


def wedge(u: PlaneVec, v: PlaneVec) -> AlgNum:
    return u.x * v.y - v.x * u.y


def dot(u: PlaneVec, v: PlaneVec) -> AlgNum:
    return u.x * v.x + u.y * v.y


@dataclass(frozen=True)
class Mat2:
    """Row-major 2x2 matrix [[a, b], [c, d]] with exact entries."""

    a: AlgNum
    b: AlgNum
    c: AlgNum
    d: AlgNum

    def __matmul__(self, other):
        if isinstance(other, PlaneVec):
            return PlaneVec(self.a * other.x + self.b * other.y,
                            self.c * other.x + self.d * other.y)
        if isinstance(other, Mat2):
            return Mat2(self.a * other.a + self.b * other.c,
                        self.a * other.b + self.b * other.d,
                        self.c * other.a + self.d * other.c,
                        self.c * other.b + self.d * other.d)
        return NotImplemented

    def det(self) -> AlgNum:
        return self.a * self.d - self.b * self.c

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, n: int):
        f = self.a.field
        if n < 0:
            return self.inverse() ** (-n)
        result = Mat2(f.one, f.zero, f.zero, f.one)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def inverse(self) -> Mat2:
        det = self.det()
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def columns(self) -> tuple[PlaneVec, PlaneVec]:
        return PlaneVec(self.a, self.c), PlaneVec(self.b, self.d)


@dataclass(frozen=True, eq=False)
class HeckeContext:
    """Precomputed data of G_q for a fixed q."""

    q: int
    field: HeckeField
    fan: tuple  # the 2q vectors U_q^i (1, 0)

    @property
    def minpoly(self) -> tuple[int, ...]:
        return self.field.minpoly

    @property
    def degree(self) -> int:
        return self.field.degree

    @property
    def lam(self) -> AlgNum:
        return self.field.lam

    @property
    def lambda_interval(self) -> tuple[Fraction, Fraction]:
        lo, hi = self.field.enclosure(64)
        return (Fraction(int(lo.numerator), int(lo.denominator)),
                Fraction(int(hi.numerator), int(hi.denominator)))

    def num(self, value) -> AlgNum:
        """Embed an int, Fraction, AlgNum or serialized string into the field."""
        if isinstance(value, str):
            return self.field.parse(value)
        return self.field.coerce(value)

    def vec(self, x, y) -> PlaneVec:
        return PlaneVec(self.num(x), self.num(y))

    # group elements -------------------------------------------------------

    def _m(self, a, b, c, d) -> Mat2:
        return Mat2(self.num(a), self.num(b), self.num(c), self.num(d))

    @property
    def S(self) -> Mat2:
        return self._m(0, -1, 1, 0)

    @property
    def T(self) -> Mat2:
        return Mat2(self.field.one, self.lam, self.field.zero, self.field.one)

    @property
    def U(self) -> Mat2:
        return self.T @ self.S

    def h(self, s) -> Mat2:
        """Horocycle element [[1, 0], [-s, 1]]."""
        return self._m(1, 0, -self.num(s), 1)

    def s_tau(self, tau) -> Mat2:
        t = self.num(tau)
        return Mat2(t, self.field.zero, self.field.zero, t.inverse())

    def g(self, a, b) -> Mat2:
        a = self.num(a)
        return Mat2(a, self.num(b), self.field.zero, a.inverse())


def qform(ctx: HeckeContext, v: PlaneVec) -> AlgNum:
    """The invariant quadratic form x^2 - lambda x y + y^2."""
    return v.x * v.x - ctx.lam * v.x * v.y + v.y * v.y


@lru_cache(maxsize=None)
def make_context(q: int) -> HeckeContext:
    if not isinstance(q, int) or q < 3:
        raise ValueError(f"q must be an integer >= 3, got {q!r}")
    field = hecke_field(q)
    lam = field.lam
    polys = recurrence_polys(q + 1)
    vals = []
    for p in polys:
        acc = field.zero
        for c in reversed(p):
            acc = acc * lam + c
        vals.append(acc)
    half = [PlaneVec(vals[i + 1], vals[i]) for i in range(q)]
    fan = tuple(half + [-v for v in half])
    return HeckeContext(q=q, field=field, fan=fan)
