"""Fast consistency checks run by ``heckebcz selftest``."""
from __future__ import annotations

from .bcz import bcz_step, in_triangle, make_point
from .hecke import make_context, qform, wedge
from .nextterm import seed_identity, take_until_slope
from .sternbrocot import StripSpec, enumerate_strip


def _fan(q):
    ctx = make_context(q)
    fan = ctx.fan
    ok = all(qform(ctx, w) == 1 for w in fan)
    ok &= all(wedge(fan[i], fan[i + 1]) == 1 for i in range(q - 1))
    ok &= wedge(fan[0], fan[q - 1]) == 1
    ok &= all(ctx.U @ fan[i] == fan[(i + 1) % (2 * q)] for i in range(2 * q))
    return ok


def _sweep_vs_tree(q, tau):
    ctx = make_context(q)
    st = seed_identity(ctx, tau)
    return [st.current] + take_until_slope(st, 1) == enumerate_strip(ctx, StripSpec(tau, 0, 1))


def _closure(q):
    ctx = make_context(q)
    p = make_point(ctx, 1, 1)
    for _ in range(50):
        p = bcz_step(ctx, p).next
        if not in_triangle(ctx, p.a, p.b):
            return False
    return True


def run_selftest():
    out = []
    for q in range(3, 13):
        out.append((f"fan invariants q={q}", bool(_fan(q)), ""))
    for q in (3, 4, 5, 6):
        out.append((f"sweep equals tree q={q} tau=15", _sweep_vs_tree(q, 15), ""))
        out.append((f"bcz closure q={q}", _closure(q), "50 steps from (1,1)"))
    n = len(enumerate_strip(make_context(3), StripSpec(20, 0, 1)))
    out.append(("farey count Q=20", n == 129, f"{n} vs 129"))
    return out
