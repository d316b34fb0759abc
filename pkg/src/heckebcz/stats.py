"""Statistics of Lambda_q: mean roof, gap distributions, counting, equidistribution.

Exact sweeps supply the vectors and Farey triangle representatives; only the
final tabulated quantities are floating point.  Monte Carlo work is split into
fixed-size chunks with seeds spawned from one ``numpy.random.SeedSequence``,
so results depend on (seed, n) only and never on the number of threads.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy import stats as sps

from .algebra import floor_ratio, sign
from .bcz import TrianglePoint
from .hecke import HeckeContext, PlaneVec, wedge
from .nextterm import Sweep, seed_custom, seed_identity, sweep
from .sternbrocot import StripSpec, _descend, enumerate_strip

__all__ = [
    "DistTable",
    "FordCircle",
    "FordChain",
    "TriangleRegion",
    "MeanRoof",
    "fan_floats",
    "sample_triangle",
    "roof_values",
    "mean_roof",
    "limiting_dist",
    "empirical_dist",
    "strip_sweep",
    "ftr_of",
    "unimodular_partner",
    "gap_statistics",
    "count_in_triangle",
    "square_equidistribution",
    "ford_circles",
    "tail_fractions",
    "sup_distance",
    "slope_ks",
    "counting_ratio",
]

CHUNK = 1 << 20
# cap for the Monte Carlo mean roof; the excess over the cap is added analytically
ROOF_CAP = 1e4


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("HECKEBCZ_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class DistTable:
    """Tail distribution t -> fraction of values >= t."""

    kind: str  # "empirical" or "limiting"
    statistic: str  # "slope_gap" or "cent_dist"
    t: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def points(self):
        return list(zip(self.t.tolist(), self.values.tolist()))

    def is_monotone(self) -> bool:
        return bool(np.all(np.diff(self.values) <= 0))


def tail_fractions(values: np.ndarray, t_grid) -> np.ndarray:
    """Counts of ``values >= t`` for each t (integers)."""
    srt = np.sort(np.asarray(values, dtype=float))
    idx = np.searchsorted(srt, np.asarray(t_grid, dtype=float), side="left")
    return srt.size - idx


def sup_distance(a: DistTable, b: DistTable) -> float:
    if not np.array_equal(a.t, b.t):
        raise ValueError("tables are tabulated on different grids")
    return float(np.max(np.abs(a.values - b.values)))


# -- float kernels on the Farey triangle -------------------------------------

def fan_floats(ctx: HeckeContext) -> tuple[np.ndarray, np.ndarray]:
    xs = np.array([float(w.x) for w in ctx.fan[: ctx.q + 1]])
    ys = np.array([float(w.y) for w in ctx.fan[: ctx.q + 1]])
    return xs, ys


def sample_triangle(ctx: HeckeContext, n: int, rng: np.random.Generator):
    """n points uniform in the Farey triangle with vertices (0,1), (1,1), (1,1-lambda)."""
    lam = float(ctx.lam)
    u = rng.random(n)
    v = rng.random(n)
    flip = u + v > 1.0
    u[flip] = 1.0 - u[flip]
    v[flip] = 1.0 - v[flip]
    return u + v, 1.0 - lam * v


def roof_values(ctx: HeckeContext, a: np.ndarray, b: np.ndarray):
    """Vectorised (R_q, L_1) at points of the triangle.

    L_1 is the first coordinate of the BCZ image.  Region ties on the
    partition lines have measure zero and are resolved by float comparison.
    """
    xs, ys = fan_floats(ctx)
    q = ctx.q
    if q == 3:
        return 1.0 / (a * b), b
    dots = a[:, None] * xs[None, 2:q] + b[:, None] * ys[None, 2:q]
    below = dots <= 1.0
    # the last column is p . (0, 1) = b <= 1, so some column is always True
    j = np.argmax(below, axis=1)
    alpha = dots[np.arange(a.size), j]
    return ys[2:q][j] / (a * alpha), alpha


def _statistic(ctx, statistic, a, b):
    r, l1 = roof_values(ctx, a, b)
    if statistic == "slope_gap":
        return r
    if statistic == "cent_dist":
        return np.sqrt(r * r + 0.25 * (1.0 / (l1 * l1) - 1.0 / (a * a)) ** 2)
    raise ValueError(f"unknown statistic {statistic!r}")


def _chunks(n: int):
    sizes = [CHUNK] * (n // CHUNK)
    if n % CHUNK:
        sizes.append(n % CHUNK)
    return sizes


def _map_chunks(fn, n, seed, threads):
    sizes = _chunks(n)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = list(zip(sizes, seeds))
    threads = threads or default_threads()
    if threads == 1:
        return [fn(size, ss) for size, ss in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


# -- mean roof -----------------------------------------------------------------

@dataclass(frozen=True)
class MeanRoof:
    value: float
    error_bound: float
    method: str
    tail: float = 0.0  # analytic contribution above the Monte Carlo cap


def _region_bounds(ctx):
    xs, ys = fan_floats(ctx)
    lam = float(ctx.lam)
    q = ctx.q

    def lines(i, a):
        # b-range of region i over abscissa a, as (lo, hi); lo is exclusive
        lo = max(1.0 - lam * a, (1.0 - a * xs[i - 1]) / ys[i - 1])
        hi = min(1.0, (1.0 - a * xs[i]) / ys[i])
        return lo, hi

    # abscissae where any two boundary lines cross: kinks of the integrand
    cands = {1.0 / lam}
    coeffs = [(lam, 1.0), (0.0, 1.0)] + [(xs[j], ys[j]) for j in range(1, q)]
    for m, (p1, r1) in enumerate(coeffs):
        for p2, r2 in coeffs[m + 1:]:
            # lines p a + r b = 1 (first is lambda a + b = 1, second is b = 1)
            den = p1 * r2 - p2 * r1
            if abs(den) > 1e-14:
                a0 = (r2 - r1) / den
                if 0.0 < a0 < 1.0:
                    cands.add(a0)
    return lines, sorted(cands), xs, ys


def _inner_roof_integral(ctx, a, lines, xs, ys):
    total = 0.0
    for i in range(2, ctx.q):
        lo, hi = lines(i, a)
        if hi <= lo:
            continue
        d_lo = a * xs[i] + lo * ys[i]
        # integral of y_i / (a (a x_i + b y_i)) db over (lo, hi]
        total += math.log1p((hi - lo) * ys[i] / d_lo) / a
    return total


def _mean_roof_quadrature(ctx, tol):
    lines, breaks, xs, ys = _region_bounds(ctx)
    lam = float(ctx.lam)
    f = lambda a: _inner_roof_integral(ctx, a, lines, xs, ys)
    edges = [0.0] + [p for p in breaks if 0.0 < p < 1.0] + [1.0]
    value = err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi - lo < 1e-15:
            continue
        v, e = integrate.quad(f, lo, hi, epsabs=tol / 4, epsrel=tol / 4, limit=500)
        value += v
        err += e
    scale = 2.0 / lam
    return MeanRoof(value * scale, err * scale, "quadrature")


def _mean_roof_montecarlo(ctx, n, seed, threads=None):
    cap = ROOF_CAP

    def chunk(size, ss):
        rng = np.random.default_rng(ss)
        a, b = sample_triangle(ctx, size, rng)
        r, _ = roof_values(ctx, a, b)
        r = np.minimum(r, cap)
        return math.fsum(r.tolist()), math.fsum((r * r).tolist()), size

    parts = _map_chunks(chunk, n, seed, threads)
    s1 = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    mean = s1 / n
    var = max(s2 / n - mean * mean, 0.0)
    se = math.sqrt(var / n)
    # m(R > t) = 2/t^2 + O(t^-3) from the two singular corners, so the mass
    # above the cap is 2/cap up to O(cap^-2)
    tail = 2.0 / cap
    tail_err = 20.0 / cap ** 2
    return MeanRoof(mean + tail, 4.0 * se + tail_err, "montecarlo", tail)


def mean_roof(ctx: HeckeContext, method: str = "quadrature", *, tol: float = 1e-9,
              n: int = 10**6, seed: int = 0, threads: int | None = None) -> MeanRoof:
    """Mean of the roof function under m_q = (2/lambda) da db.

    ``quadrature`` integrates the region-wise closed form of the inner b
    integral with adaptive Gauss-Kronrod in a; ``montecarlo`` averages the
    capped roof over uniform samples and adds the analytic tail above the cap.
    """
    if method == "quadrature":
        if tol <= 0:
            raise ValueError("tol must be positive")
        res = _mean_roof_quadrature(ctx, tol)
        if not res.error_bound < max(tol, 1e-12) * 10:
            raise RuntimeError(f"quadrature did not converge: error estimate {res.error_bound:g}")
        return res
    if method == "montecarlo":
        if n < 10**4:
            raise ValueError("n must be >= 1e4")
        return _mean_roof_montecarlo(ctx, n, seed, threads)
    raise ValueError(f"unknown method {method!r}")


@lru_cache(maxsize=None)
def _cached_mean_roof(q: int) -> float:
    from .hecke import make_context
    return mean_roof(make_context(q)).value


# -- limiting and empirical distributions -------------------------------------

def limiting_dist(ctx: HeckeContext, statistic: str, t_grid, n_samples: int, seed: int,
                  threads: int | None = None) -> DistTable:
    """Monte Carlo estimate of m_q(F >= t) for F the roof or the center distance."""
    if n_samples < 10**4:
        raise ValueError("n_samples must be >= 1e4")
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must be sorted")

    def chunk(size, ss):
        rng = np.random.default_rng(ss)
        a, b = sample_triangle(ctx, size, rng)
        return tail_fractions(_statistic(ctx, statistic, a, b), t_grid)

    counts = sum(_map_chunks(chunk, n_samples, seed, threads))
    p = counts / n_samples
    se = np.sqrt(p * (1 - p) / n_samples)
    meta = {"q": ctx.q, "samples": n_samples, "seed": seed,
            "max_standard_error": float(se.max()) if se.size else 0.0}
    return DistTable("limiting", statistic, t_grid, p, meta)


def ftr_of(ctx: HeckeContext, tau, u: PlaneVec) -> TrianglePoint:
    """Farey triangle representative of (Lambda_q, tau, u) for u in Lambda_q, x(u) > 0."""
    tau = ctx.num(tau)
    partner = unimodular_partner(ctx, u)
    a = u.x / tau
    b0 = partner.x / tau
    step = ctx.lam * a
    k = floor_ratio(1 - b0, step)
    return TrianglePoint(a, b0 + step * k)


def unimodular_partner(ctx: HeckeContext, u: PlaneVec) -> PlaneVec:
    """Some v in Lambda_q with u ^ v = 1, read off the Stern-Brocot tree."""
    if sign(u.x) <= 0:
        raise ValueError("u must have positive x-component")
    s = sign(u.y)
    if s == 0:
        if u.x != 1:
            raise ValueError("u is not a primitive element of Lambda_q")
        return ctx.vec(0, 1)
    target = u if s > 0 else PlaneVec(u.x, -u.y)
    slope = target.y / target.x
    prev_pair = None
    for u0, u1, exact in _descend(ctx, slope):
        if exact is not None:
            # exact is a child of prev_pair; its right neighbour is a partner
            a0, a1 = prev_pair
            bounds = [a0] + [PlaneVec(w.x * a0.x + w.y * a1.x, w.x * a0.y + w.y * a1.y)
                             for w in ctx.fan[1:ctx.q - 1]] + [a1]
            j = bounds.index(exact)
            v = bounds[j + 1]
            break
        prev_pair = (u0, u1)
    if exact != target:
        raise ValueError("u is not a primitive element of Lambda_q")
    if s < 0:
        v = PlaneVec(-v.x, v.y)
    assert wedge(u, v) == 1
    return v


def strip_sweep(ctx: HeckeContext, tau, interval) -> Sweep:
    """Next-term sweep over F_I(Lambda_q, tau) for a closed interval I."""
    lo, hi = (ctx.num(v) for v in interval)
    tau = ctx.num(tau)
    if sign(lo) == 0:
        state = seed_identity(ctx, tau)
    else:
        first = _first_at_or_above(ctx, tau, lo, hi)
        if first is None:
            raise ValueError("empty sweep: no vector of the strip has slope in the interval")
        state = seed_custom(ctx, tau, ftr_of(ctx, tau, first), first)
    sw = sweep(state, hi)
    if sign(sw.vectors[0].y - lo * sw.vectors[0].x) < 0:  # pragma: no cover
        raise AssertionError("sweep started below the interval")
    return sw


def _first_at_or_above(ctx, tau, lo, hi):
    width = hi - lo
    frac = 64
    while True:
        top = lo + width / frac if frac > 1 else hi
        vs = enumerate_strip(ctx, StripSpec(tau, lo, top))
        if vs:
            return vs[0]
        if frac == 1:
            return None
        frac //= 4 if frac >= 4 else frac


def _sweep_floats(sw: Sweep):
    vec = sw.vectors + [sw.successor]
    qs = np.array([float(v.x) for v in vec])
    ys = np.array([float(v.y) for v in vec])
    return qs, ys


def empirical_dist(ctx: HeckeContext, statistic: str, tau, interval, t_grid,
                   sweep_result: Sweep | None = None) -> DistTable:
    """Tail fractions of tau^2 slopegap or tau^2 centdist over F_I(Lambda_q, tau)."""
    t_grid = np.asarray(t_grid, dtype=float)
    sw = sweep_result if sweep_result is not None else strip_sweep(ctx, tau, interval)
    if not sw.vectors:
        raise ValueError("empty sweep")
    tau_f = float(ctx.num(tau))
    vals = gap_statistics(sw, statistic) * tau_f ** 2
    counts = tail_fractions(vals, t_grid)
    meta = {"q": ctx.q, "tau": str(tau), "interval": [str(v) for v in interval],
            "count": len(sw.vectors)}
    return DistTable("empirical", statistic, t_grid, counts / len(vals), meta)


def gap_statistics(sw: Sweep, statistic: str) -> np.ndarray:
    """Unscaled slope gaps or Ford-center distances between consecutive sweep vectors."""
    qs, ys = _sweep_floats(sw)
    slopes = ys / qs
    dslope = np.diff(slopes)
    if statistic == "slope_gap":
        return dslope
    if statistic == "cent_dist":
        dh = np.diff(0.5 / (qs * qs))
        return np.hypot(dslope, dh)
    raise ValueError(f"unknown statistic {statistic!r}")


def slope_ks(sw: Sweep, interval=(0, 1)) -> float:
    """Kolmogorov-Smirnov distance of the sweep's slopes from uniform on the interval."""
    lo, hi = (float(v) for v in interval)
    qs, ys = _sweep_floats(sw)
    slopes = ys[:-1] / qs[:-1]
    return float(sps.kstest(slopes, "uniform", args=(lo, hi - lo)).statistic)


def counting_ratio(sw: Sweep, width: float = 1.0) -> float:
    """N_I / (|I| tau^2) for a sweep over F_I(Lambda_q, tau) with |I| = width."""
    return len(sw.vectors) / (width * float(sw.tau) ** 2)


# -- counting ---------------------------------------------------------------

@dataclass(frozen=True)
class TriangleRegion:
    """Triangle with vertices 0, e1, e2; both edges must point into x > 0.

    The flags say whether the edge along e1, the edge along e2 and the side
    opposite the origin belong to the region.
    """

    e1: tuple
    e2: tuple
    include_e1: bool = True
    include_e2: bool = True
    include_far: bool = True

    def vectors(self, ctx):
        return ctx.vec(*self.e1), ctx.vec(*self.e2)

    def area(self, ctx) -> float:
        u, v = self.vectors(ctx)
        return abs(float(wedge(u, v))) / 2


def count_in_triangle(ctx: HeckeContext, region: TriangleRegion, tau) -> tuple[int, float]:
    """Exact #(Lambda_q in tau * region) and the predicted (2/m_q) area tau^2."""
    tau = ctx.num(tau)
    if sign(tau) <= 0:
        raise ValueError("tau must be positive")
    e1, e2 = region.vectors(ctx)
    w = wedge(e1, e2)
    if w.is_zero():
        raise ValueError("degenerate triangle")
    if sign(w) < 0:
        e1, e2 = e2, e1
        region = TriangleRegion(region.e2, region.e1, region.include_e2,
                                region.include_e1, region.include_far)
        w = -w
    if sign(e1.x) <= 0 or sign(e2.x) <= 0:
        raise ValueError("both edge vectors must have positive x-component")
    lo, hi = e1.y / e1.x, e2.y / e2.x
    xmax = e1.x if sign(e1.x - e2.x) >= 0 else e2.x
    count = 0
    for v in enumerate_strip(ctx, StripSpec(tau * xmax, lo, hi)):
        # v = s e1 + t e2 with s = (v ^ e2)/w, t = (e1 ^ v)/w
        s_ = wedge(v, e2)
        t_ = wedge(e1, v)
        if s_.is_zero() and not region.include_e2:
            continue
        if t_.is_zero() and not region.include_e1:
            continue
        far = sign(s_ + t_ - tau * w)
        if far > 0 or (far == 0 and not region.include_far):
            continue
        count += 1
    predicted = 2.0 / _cached_mean_roof(ctx.q) * region.area(ctx) * float(tau) ** 2
    return count, predicted


def _square_points(ctx, tau):
    base = enumerate_strip(ctx, StripSpec(tau, 0, 1))
    pts = set()
    for v in base:
        x, y = v.x, v.y
        for p, r in ((x, y), (y, x)):
            for sx in (1, -1):
                for sy in (1, -1):
                    pts.add((p * sx, r * sy))
    return pts


def _bin(coord, tau, n):
    """Cell index of coord/tau in [-1, 1] split into n cells, mirror symmetric."""
    k = floor_ratio(abs(coord) * n, 2 * tau) if n % 2 == 0 else \
        floor_ratio(abs(coord) * n + tau, 2 * tau)
    half = n // 2
    if n % 2 == 0:
        k = min(k, half - 1)
        return half + k if sign(coord) >= 0 else half - 1 - k
    k = min(k, half)
    return half + k if sign(coord) >= 0 else half - k


def square_equidistribution(ctx: HeckeContext, tau, grid_n: int, return_points: bool = False):
    """Counts of (1/tau) Lambda_q on a grid_n x grid_n grid over [-1, 1]^2 and chi^2.

    Points on the coordinate axes fall on a cell boundary when grid_n is even;
    they are assigned by a quarter-turn rule ((x,0) with x > 0 goes up, (0,y)
    with y > 0 goes left, and so on) so the counts keep the full dihedral symmetry.
    """
    tau = ctx.num(tau)
    if sign(tau - 1) < 0 or grid_n < 2:
        raise ValueError("need tau >= 1 and grid_n >= 2")
    pts = _square_points(ctx, tau)
    counts = np.zeros((grid_n, grid_n), dtype=np.int64)
    half = grid_n // 2
    for x, y in pts:
        if grid_n % 2 == 0 and y.is_zero():
            col = _bin(x, tau, grid_n)
            row = half if sign(x) > 0 else half - 1
        elif grid_n % 2 == 0 and x.is_zero():
            row = _bin(y, tau, grid_n)
            col = half - 1 if sign(y) > 0 else half
        else:
            col, row = _bin(x, tau, grid_n), _bin(y, tau, grid_n)
        counts[row, col] += 1
    expected = counts.sum() / grid_n ** 2
    chi2 = float(((counts - expected) ** 2).sum() / expected)
    if return_points:
        return counts, chi2, pts
    return counts, chi2


# -- Ford circles ----------------------------------------------------------------

@dataclass(frozen=True)
class FordCircle:
    center: tuple
    radius: float
    source: PlaneVec


@dataclass
class FordChain:
    """Ford circles of a sweep in slope order with the contact type of neighbours."""

    circles: list
    contacts: list  # "tangent" | "external" | "overlap" for each consecutive pair

    @property
    def overlaps(self) -> int:
        return self.contacts.count("overlap")


def ford_circle(v: PlaneVec) -> FordCircle:
    r, s = float(v.x), float(v.y)
    if r == 0:
        raise ValueError("vectors with zero x-component give a line, not a circle")
    rad = 1.0 / (2.0 * r * r)
    return FordCircle((s / r, rad), rad, v)


def contact(u: PlaneVec, v: PlaneVec) -> str:
    w = abs(wedge(u, v))
    s = sign(w - 1)
    return "tangent" if s == 0 else "external" if s > 0 else "overlap"


def ford_circles(ctx: HeckeContext, tau, interval, sweep_result: Sweep | None = None) -> FordChain:
    sw = sweep_result if sweep_result is not None else strip_sweep(ctx, tau, interval)
    vs = sw.vectors
    circles = [ford_circle(v) for v in vs]
    contacts = [contact(u, v) for u, v in zip(vs, vs[1:])]
    return FordChain(circles, contacts)

