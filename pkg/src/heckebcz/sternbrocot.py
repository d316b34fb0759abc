"""The G_q Stern-Brocot process on Lambda_q.

Children of a unimodular pair (u0, u1) are the combinations
x_i u0 + y_i u1 over the interior fan vectors w_i = (x_i, y_i), 1 <= i <= q-2.
Every proper descendant of the pair is a combination with coefficients >= 1,
which is what makes the x-bound pruning below sound.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgNum, sign
from .hecke import HeckeContext, PlaneVec, wedge

__all__ = [
    "UnimodularPair",
    "StripSpec",
    "children",
    "enumerate_strip",
    "iter_strip",
    "DirichletResult",
    "dirichlet_descent",
    "find_slope",
]


@dataclass(frozen=True)
class UnimodularPair:
    u0: PlaneVec
    u1: PlaneVec

    def __post_init__(self):
        w = wedge(self.u0, self.u1)
        if w != 1:
            raise ValueError(f"pair is not unimodular: wedge = {float(w):.6g}")


@dataclass(frozen=True)
class StripSpec:
    """Vectors with 0 < x <= tau and slope in [slope_lo, slope_hi].

    ``None`` bounds stand for -infinity / +infinity.
    """

    tau: object
    slope_lo: object = 0
    slope_hi: object = None

    def __post_init__(self):
        if self.tau is None:
            raise ValueError("tau is required")
        # ordering of exact/serialized bounds is checked once a context is known
        lo, hi = self.slope_lo, self.slope_hi
        if isinstance(lo, (int, Fraction)) and isinstance(hi, (int, Fraction)) and hi <= lo:
            raise ValueError("slope_lo must be < slope_hi")

    def bounds(self, ctx: HeckeContext):
        """(tau, lo, hi) embedded in the field; None stays None."""
        tau = ctx.num(self.tau)
        if sign(tau) <= 0:
            raise ValueError("tau must be positive")
        lo = None if self.slope_lo is None else ctx.num(self.slope_lo)
        hi = None if self.slope_hi is None else ctx.num(self.slope_hi)
        if lo is not None and hi is not None and sign(hi - lo) <= 0:
            raise ValueError("slope_lo must be < slope_hi")
        return tau, lo, hi


def children(ctx: HeckeContext, pair) -> list[PlaneVec]:
    """The q-2 Stern-Brocot children of a unimodular pair, in increasing slope."""
    u0, u1 = (pair.u0, pair.u1) if isinstance(pair, UnimodularPair) else pair
    return [_child(u0, u1, ctx.fan[i]) for i in range(1, ctx.q - 1)]


def _child(u0, u1, w):
    return PlaneVec(w.x * u0.x + w.y * u1.x, w.x * u0.y + w.y * u1.y)


def _slope_cmp(v: PlaneVec, s: AlgNum) -> int:
    """sign(slope(v) - s) for x(v) > 0; vertical vectors compare as +infinity."""
    if v.x.is_zero():
        return 1
    return sign(v.y - s * v.x)


def _first_quadrant(ctx, tau, lo, hi):
    """Vectors with 0 < x <= tau, lo <= slope <= hi (hi None = inf), lo >= 0.

    Generated lazily in increasing slope; infinite when hi is None.
    """
    one = ctx.field.one
    zero = ctx.field.zero
    root0 = PlaneVec(one, zero)
    root1 = PlaneVec(zero, one)

    def wanted(v):
        if sign(v.x - tau) > 0:
            return False
        if _slope_cmp(v, lo) < 0:
            return False
        return hi is None or _slope_cmp(v, hi) <= 0

    if wanted(root0):
        yield root0
    fan = ctx.fan[1:ctx.q - 1]
    stack = [(root0, root1)]
    while stack:
        item = stack.pop()
        if isinstance(item, PlaneVec):
            if wanted(item):
                yield item
            continue
        u0, u1 = item
        # every proper descendant has x >= x(u0) + x(u1)
        if sign(u0.x + u1.x - tau) > 0:
            continue
        # open sector slopes (slope(u0), slope(u1)) must meet [lo, hi]
        if _slope_cmp(u1, lo) <= 0:
            continue
        if hi is not None and _slope_cmp(u0, hi) >= 0:
            continue
        kids = [_child(u0, u1, w) for w in fan]
        bounds = [u0] + kids + [u1]
        # push in reverse so that the in-order walk pops sectors left to right
        for j in range(len(bounds) - 2, -1, -1):
            stack.append((bounds[j], bounds[j + 1]))
            if j > 0:
                stack.append(bounds[j])


def _reflect(v: PlaneVec) -> PlaneVec:
    return PlaneVec(v.x, -v.y)


def iter_strip(ctx: HeckeContext, spec: StripSpec):
    """Lazily yield the strip elements by increasing slope; needs a finite slope_lo.

    With slope_hi = None the sequence is infinite (it contains every (1, n lambda)).
    """
    if spec.slope_lo is None:
        raise ValueError("iter_strip needs a finite slope_lo")
    tau, lo, hi = spec.bounds(ctx)
    if sign(lo) >= 0:
        yield from _first_quadrant(ctx, tau, lo, hi)
        return
    if hi is not None and sign(hi) <= 0:
        yield from enumerate_strip(ctx, spec)
        return
    yield from enumerate_strip(ctx, StripSpec(spec.tau, spec.slope_lo, 0))
    for v in _first_quadrant(ctx, tau, ctx.field.zero, hi):
        if not v.y.is_zero():
            yield v


def enumerate_strip(ctx: HeckeContext, spec: StripSpec) -> list[PlaneVec]:
    """Elements of Lambda_q in the strip, sorted by increasing slope.

    The slope range must be bounded: Lambda_q contains (1, n lambda) for every
    integer n, so an unbounded range holds infinitely many vectors.
    """
    if spec.slope_lo is None or spec.slope_hi is None:
        raise ValueError("unbounded slope range gives infinitely many vectors; use iter_strip")
    tau, lo, hi = spec.bounds(ctx)
    zero = ctx.field.zero
    if sign(lo) >= 0:
        return list(_first_quadrant(ctx, tau, lo, hi))
    # negative slopes by the reflection y -> -y
    if sign(hi) < 0:
        mirrored = _first_quadrant(ctx, tau, -hi, -lo)
        return [_reflect(v) for v in reversed(list(mirrored))]
    mirrored = list(_first_quadrant(ctx, tau, zero, -lo))
    result = [_reflect(v) for v in reversed(mirrored) if not v.y.is_zero()]
    result.extend(_first_quadrant(ctx, tau, zero, hi))
    return result


@dataclass(frozen=True)
class DirichletResult:
    """Approximants (x, y) with |alpha - y/x| <= 1/(2 x^2), by increasing x.

    ``exact`` is set when alpha is the slope of a generated vector.
    """

    approximants: tuple
    exact: PlaneVec | None = None

    @property
    def flagged(self) -> bool:
        return self.exact is not None


def _descend(ctx, alpha):
    """Walk the nested sectors containing (1, alpha), alpha > 0.

    Yields ``(u0, u1, None)`` per sector, or ``(None, None, v)`` once a
    generated vector has slope exactly alpha.
    """
    one, zero = ctx.field.one, ctx.field.zero
    u0, u1 = PlaneVec(one, zero), PlaneVec(zero, one)
    fan = ctx.fan[1:ctx.q - 1]
    while True:
        yield u0, u1, None
        prev = u0
        for w in fan:
            c = _child(u0, u1, w)
            s = _slope_cmp(c, alpha)
            if s == 0:
                yield None, None, c
                return
            if s > 0:
                u0, u1 = prev, c
                break
            prev = c
        else:
            u0 = prev


def _passes(alpha, v) -> bool:
    """|alpha - y/x| <= 1/(2 x^2), exactly."""
    err = alpha * v.x - v.y
    return sign(1 - 2 * v.x * abs(err)) >= 0


def dirichlet_descent(ctx: HeckeContext, alpha, count: int, max_steps: int = 10**6) -> DirichletResult:
    if count < 1:
        raise ValueError("count must be >= 1")
    alpha = ctx.num(alpha)
    s = sign(alpha)
    if s == 0:
        return DirichletResult((), ctx.vec(1, 0))
    flip = s < 0
    target = -alpha if flip else alpha
    found = []
    last_x = None
    for step, (u0, u1, exact) in enumerate(_descend(ctx, target)):
        if exact is not None:
            if flip:
                exact = _reflect(exact)
            return DirichletResult(tuple(found), exact)
        for v in sorted((u0, u1), key=lambda v: float(v.x)):
            if v.x.is_zero() or (last_x is not None and sign(v.x - last_x) <= 0):
                continue
            if _passes(target, v):
                found.append(_reflect(v) if flip else v)
                last_x = v.x
                if len(found) >= count:
                    return DirichletResult(tuple(found))
        if step >= max_steps:
            raise RuntimeError(f"descent did not produce {count} approximants in {max_steps} steps")
    raise AssertionError("unreachable")  # pragma: no cover


def find_slope(ctx: HeckeContext, slope, max_coord=10**6) -> PlaneVec | None:
    """The vector of Lambda_q with x > 0 and the given slope, if its coordinates
    stay within ``max_coord``; None otherwise."""
    slope = ctx.num(slope)
    s = sign(slope)
    if s == 0:
        return ctx.vec(1, 0)
    target = -slope if s < 0 else slope
    bound = 2 * ctx.num(max_coord)
    for u0, u1, exact in _descend(ctx, target):
        if exact is not None:
            return _reflect(exact) if s < 0 else exact
        # component sums of descendants are at least the sum over the parents
        if sign(u0.x + u0.y + u1.x + u1.y - bound) > 0:
            return None
