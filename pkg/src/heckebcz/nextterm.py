"""Slope-ordered enumeration of Lambda_q in a vertical strip, driven by the BCZ map.

Starting from a vector u_0 and its Farey triangle representative (FTR), each
step applies the BCZ map to the FTR; the new x-component is tau times the new
FTR's first coordinate and the new slope exceeds the old by roof / tau^2.
"""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgNum, floor_ratio, sign
from .bcz import BczStep, TrianglePoint, bcz_step, in_triangle
from .hecke import HeckeContext, PlaneVec, wedge

__all__ = [
    "NextTermState",
    "seed_identity",
    "seed_custom",
    "advance",
    "take_until_slope",
    "Sweep",
    "sweep",
]


@dataclass(frozen=True)
class NextTermState:
    ctx: HeckeContext
    tau: AlgNum
    ftr: TrianglePoint
    current: PlaneVec
    n: int = 0

    def slope(self) -> AlgNum:
        return self.current.y / self.current.x


def seed_identity(ctx: HeckeContext, tau) -> NextTermState:
    """State at u_0 = (1, 0) with FTR (1/tau, floor(tau/lambda) lambda / tau)."""
    tau = ctx.num(tau)
    if sign(tau - 1) < 0:
        raise ValueError("tau must be >= 1 so that (1, 0) lies in the strip")
    k = floor_ratio(tau, ctx.lam)
    inv = tau.inverse()
    ftr = TrianglePoint(inv, ctx.lam * k * inv)
    return NextTermState(ctx, tau, ftr, ctx.vec(1, 0), 0)


def seed_custom(ctx: HeckeContext, tau, ftr: TrianglePoint, current: PlaneVec) -> NextTermState:
    tau = ctx.num(tau)
    if sign(tau) <= 0:
        raise ValueError("tau must be positive")
    if not in_triangle(ctx, ftr.a, ftr.b):
        raise ValueError("FTR is not in the Farey triangle")
    if current.x != tau * ftr.a:
        raise ValueError("inconsistent seed: current.x must equal tau * ftr.a")
    return NextTermState(ctx, tau, ftr, current, 0)


def _next_vector(state: NextTermState, step: BczStep) -> PlaneVec:
    # a_{n+1} = q_{n+1} (a_n/q_n + R/tau^2) with R = y_i / (L_0 L_1), L_0 = q_n/tau,
    # L_1 = q_{n+1}/tau, which collapses to (q_{n+1} a_n + y_i) / q_n
    cur = state.current
    q_next = state.tau * step.next.a
    y_i = state.ctx.fan[step.region_index].y
    a_next = (q_next * cur.y + y_i) / cur.x
    return PlaneVec(q_next, a_next)


def advance(state: NextTermState) -> tuple[NextTermState, PlaneVec]:
    """Move to the vector of Lambda_q in the strip with the next larger slope."""
    step = bcz_step(state.ctx, state.ftr)
    v = _next_vector(state, step)
    return NextTermState(state.ctx, state.tau, step.next, v, state.n + 1), v


def take_until_slope(state: NextTermState, slope_max) -> list[PlaneVec]:
    """Vectors after ``state.current`` with slope <= slope_max, in order."""
    return sweep(state, slope_max).vectors[1:]


@dataclass
class Sweep:
    """Record of a next-term sweep.

    ``vectors[j]`` has FTR ``ftrs[j]``; ``regions[j]`` is the region index of
    ``ftrs[j]``.  ``successor`` is the first vector past the slope bound, so
    every recorded vector has a following gap.
    """

    ctx: HeckeContext
    tau: AlgNum
    vectors: list
    ftrs: list
    regions: list
    successor: PlaneVec | None

    def __len__(self):
        return len(self.vectors)


def sweep(state: NextTermState, slope_max, check_every: int = 1024) -> Sweep:
    """Advance from ``state`` until the slope would exceed ``slope_max``.

    The starting vector is included.  Every ``check_every`` steps the wedge law
    u_n ^ u_{n+1} = y_i is verified as a guard against arithmetic regressions.
    """
    ctx = state.ctx
    s_max = ctx.num(slope_max)
    cur = state.current
    if sign(cur.y - s_max * cur.x) > 0:
        raise ValueError("slope_max is below the current slope")
    vectors, ftrs, regions = [cur], [state.ftr], []
    fan_y = [w.y for w in ctx.fan]
    tau = state.tau
    ftr = state.ftr
    n = 0
    while True:
        step = bcz_step(ctx, ftr)
        regions.append(step.region_index)
        q_next = tau * step.next.a
        y_i = fan_y[step.region_index]
        a_next = (q_next * cur.y + y_i) / cur.x
        nxt = PlaneVec(q_next, a_next)
        n += 1
        if check_every and n % check_every == 0 and wedge(cur, nxt) != y_i:
            raise ArithmeticError(f"wedge law violated at step {n}")
        if sign(a_next - s_max * q_next) > 0:
            return Sweep(ctx, tau, vectors, ftrs, regions, nxt)
        vectors.append(nxt)
        ftrs.append(step.next)
        cur, ftr = nxt, step.next
