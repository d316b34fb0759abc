"""The G_q-Farey triangle, its roof function and the BCZ return map."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .algebra import AlgNum, floor_ratio, sign
from .hecke import HeckeContext, PlaneVec

__all__ = [
    "TrianglePoint",
    "BczStep",
    "Periodicity",
    "in_triangle",
    "make_point",
    "region_index",
    "roof",
    "bcz_index",
    "bcz_step",
    "orbit",
    "is_periodic",
    "inverse_slope_certificate",
]


class TrianglePoint:
    """A point (a, b) of the G_q-Farey triangle.

    The constructor does not check membership; use :func:`make_point` for
    untrusted input.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: AlgNum, b: AlgNum):
        self.a = a
        self.b = b

    def __eq__(self, other):
        if not isinstance(other, TrianglePoint):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"TrianglePoint({self.a!r}, {self.b!r})"

    def __iter__(self):
        yield self.a
        yield self.b

    def to_float(self) -> tuple[float, float]:
        return float(self.a), float(self.b)


def in_triangle(ctx: HeckeContext, a, b) -> bool:
    a, b = ctx.num(a), ctx.num(b)
    return (sign(a) > 0 and sign(a - 1) <= 0
            and sign(b - 1) <= 0 and sign(b - 1 + ctx.lam * a) > 0)


def make_point(ctx: HeckeContext, a, b) -> TrianglePoint:
    a, b = ctx.num(a), ctx.num(b)
    if not in_triangle(ctx, a, b):
        raise ValueError(f"({float(a):.6g}, {float(b):.6g}) is not in the G_{ctx.q}-Farey triangle")
    return TrianglePoint(a, b)


def _dot(p: TrianglePoint, w: PlaneVec) -> AlgNum:
    return p.a * w.x + p.b * w.y


def region_index(ctx: HeckeContext, p: TrianglePoint) -> int:
    """The i in 2..q-1 with p.w_{i-1} > 1 and p.w_i <= 1."""
    q = ctx.q
    if q == 3:
        return 2
    fan = ctx.fan
    # float guess, then exact confirmation of the two defining inequalities
    af, bf = float(p.a), float(p.b)
    guess = q - 1
    for i in range(2, q):
        w = fan[i]
        if af * float(w.x) + bf * float(w.y) <= 1.0:
            guess = i
            break
    order = [guess] + [i for i in range(2, q) if i != guess]
    for i in order:
        if sign(_dot(p, fan[i]) - 1) <= 0 and sign(_dot(p, fan[i - 1]) - 1) > 0:
            return i
    raise ArithmeticError(f"no Farey triangle region contains {p!r}; inconsistent arithmetic")


def roof(ctx: HeckeContext, p: TrianglePoint, i: int | None = None) -> AlgNum:
    """Return time y_i / (a * (p . w_i))."""
    if i is None:
        i = region_index(ctx, p)
    w = ctx.fan[i]
    return w.y / (p.a * _dot(p, w))


def bcz_index(ctx: HeckeContext, p: TrianglePoint, i: int) -> int:
    """floor((1 - p.w_{i+1}) / (lambda * p.w_i))."""
    alpha = _dot(p, ctx.fan[i])
    beta = _dot(p, ctx.fan[i + 1])
    return floor_ratio(1 - beta, ctx.lam * alpha)


@dataclass(frozen=True)
class BczStep:
    """One application of the BCZ map from ``point``."""

    point: TrianglePoint
    region_index: int
    k: int
    next: TrianglePoint
    ctx: HeckeContext = field(repr=False, compare=False)

    @cached_property
    def roof(self) -> AlgNum:
        # next.a is p . w_i
        y = self.ctx.fan[self.region_index].y
        return y / (self.point.a * self.next.a)


def bcz_step(ctx: HeckeContext, p: TrianglePoint) -> BczStep:
    i = region_index(ctx, p)
    fan = ctx.fan
    alpha = _dot(p, fan[i])
    beta = _dot(p, fan[i + 1])
    lam_alpha = ctx.lam * alpha
    k = floor_ratio(1 - beta, lam_alpha)
    nxt = TrianglePoint(alpha, beta + lam_alpha * k)
    return BczStep(p, i, k, nxt, ctx)


def orbit(ctx: HeckeContext, p: TrianglePoint, n: int) -> list[BczStep]:
    if n < 0:
        raise ValueError("n must be >= 0")
    steps = []
    for _ in range(n):
        step = bcz_step(ctx, p)
        steps.append(step)
        p = step.next
    return steps


@dataclass(frozen=True)
class Periodicity:
    """Outcome of a budgeted periodicity check.

    ``period`` is None when no recurrence was seen within ``steps`` iterations.
    """

    period: int | None
    steps: int

    @property
    def periodic(self) -> bool:
        return self.period is not None


def is_periodic(ctx: HeckeContext, p: TrianglePoint, max_steps: int = 100_000) -> Periodicity:
    """Iterate the exact map until ``p`` recurs or the budget runs out."""
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    cur = p
    for n in range(1, max_steps + 1):
        cur = bcz_step(ctx, cur).next
        if cur == p:
            return Periodicity(n, n)
    return Periodicity(None, max_steps)


def inverse_slope_certificate(ctx: HeckeContext, p: TrianglePoint, max_coord=10**6):
    """Search the Stern-Brocot tree for a vector of Lambda_q with inverse slope b/a.

    Returns the vector (x, y) with x / y = b / a, or None when none exists with
    coordinates up to ``max_coord``.  By the symmetries of Lambda_q this is the
    swap of a vector of slope b/a.
    """
    from .sternbrocot import find_slope

    ratio = p.b / p.a
    v = find_slope(ctx, ratio, max_coord)
    return None if v is None else v.swap()
