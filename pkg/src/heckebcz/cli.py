"""Command-line interface.

    heckebcz [--config FILE] enumerate --q 3 --tau 5 --interval 0,1
    heckebcz orbit --q 5 --a 1 --b 1 --n 3
    heckebcz stats mean-roof --q 5 --method montecarlo --samples 1e6 --seed 1
    heckebcz selftest

Settings come from flags, then the JSON config file, then built-in defaults.
Exact numbers are accepted as rationals ("3/4", "0.25"), as "lam", or as
coefficient tuples over the power basis of lambda_q ("1,1/2" = (1 + lambda)/2).
Intervals are written "lo,hi", or "lo;hi" when a bound itself contains commas.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import stats
from .algebra import sign
from .bcz import in_triangle, make_point, orbit, roof
from .hecke import make_context
from .output import Table, ford_svg, points_svg
from .sternbrocot import dirichlet_descent

DEFAULTS = {
    "q": 3,
    "tau": "10",
    "interval": "0,1",
    "format": "csv",
    "output": "-",
    "seed": None,
    "tol": 1e-9,
    "samples": 10**6,
    "threads": None,
    "grid": "0:0.1:5",
    "method": "quadrature",
    "grid_n": 10,
    "count": 10,
    "width": 1000,
}


class CliError(Exception):
    pass


# -- value parsing ---------------------------------------------------------------

def parse_exact(ctx, text):
    text = str(text).strip()
    if text in ("lam", "lambda"):
        return ctx.lam
    try:
        return ctx.num(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"cannot parse number {text!r}: {exc}") from None


def parse_interval(ctx, text):
    if isinstance(text, (list, tuple)):
        parts = [str(p) for p in text]
    else:
        text = str(text)
        parts = text.split(";") if ";" in text else text.split(",")
    if len(parts) != 2:
        raise CliError(f"interval must have two bounds, got {text!r}")
    lo, hi = (parse_exact(ctx, p) for p in parts)
    if sign(hi - lo) <= 0:
        raise CliError("interval needs lo < hi")
    return lo, hi


def parse_count(text) -> int:
    """Integer that may be written as 1e6."""
    try:
        f = Fraction(str(text))
    except ValueError:
        raise CliError(f"not a number: {text!r}") from None
    if f.denominator != 1:
        raise CliError(f"expected an integer, got {text!r}")
    return int(f)


def parse_grid(text):
    """"start:step:stop" (inclusive) or a comma list, as a float array."""
    text = str(text)
    if ":" in text:
        try:
            start, step, stop = (Fraction(p) for p in text.split(":"))
        except ValueError:
            raise CliError(f"bad grid {text!r}") from None
        if step <= 0 or stop < start:
            raise CliError(f"bad grid {text!r}")
        n = int((stop - start) / step)
        return np.array([float(start + k * step) for k in range(n + 1)])
    try:
        vals = np.array([float(Fraction(p)) for p in text.split(",")])
    except ValueError:
        raise CliError(f"bad grid {text!r}") from None
    if np.any(np.diff(vals) < 0):
        raise CliError("grid must be ascending")
    return vals


def parse_pair(ctx, text):
    parts = str(text).split(";") if ";" in str(text) else str(text).split(",")
    if len(parts) != 2:
        raise CliError(f"expected a vector x,y, got {text!r}")
    return tuple(parse_exact(ctx, p) for p in parts)


# -- configuration -------------------------------------------------------------------

def load_config(path):
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise CliError(f"config {path} must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def resolve(args, config):
    """Merge flags > config > defaults into a plain dict."""
    out = dict(DEFAULTS)
    for k, v in config.items():
        out[k] = v
    for k, v in vars(args).items():
        if v is not None:
            out[k] = v
    return out


def context_for(cfg):
    try:
        q = int(cfg["q"])
    except (TypeError, ValueError):
        raise CliError(f"q must be an integer, got {cfg['q']!r}") from None
    if q < 3:
        raise CliError(f"q must be >= 3, got {q}")
    return make_context(q)


def positive_tau(ctx, cfg):
    tau = parse_exact(ctx, cfg["tau"])
    if sign(tau) <= 0:
        raise CliError("tau must be positive")
    return tau


def threads_for(cfg):
    t = cfg.get("threads")
    return None if t is None else max(1, int(t))


# -- commands ---------------------------------------------------------------------------

def cmd_enumerate(cfg) -> Table:
    ctx = context_for(cfg)
    tau = positive_tau(ctx, cfg)
    lo, hi = parse_interval(ctx, cfg["interval"])
    table = Table("enumerate",
                  ["index", "x_exact", "y_exact", "x_float", "y_float", "slope_float",
                   "region_index", "roof_float"],
                  meta={"q": ctx.q, "tau": tau, "interval": [lo, hi]})
    if sign(tau - 1) < 0:
        return table  # no vector of Lambda_q has 0 < x < 1
    sw = stats.strip_sweep(ctx, tau, (lo, hi))
    for j, v in enumerate(sw.vectors):
        i = sw.regions[j]
        r = roof(ctx, sw.ftrs[j], i)
        xf, yf = float(v.x), float(v.y)
        table.append([j, v.x, v.y, xf, yf, yf / xf, i, float(r)])
    return table


def cmd_orbit(cfg) -> Table:
    ctx = context_for(cfg)
    if cfg.get("a") is None or cfg.get("b") is None:
        raise CliError("orbit needs --a and --b")
    a, b = parse_exact(ctx, cfg["a"]), parse_exact(ctx, cfg["b"])
    if not in_triangle(ctx, a, b):
        raise CliError(f"({cfg['a']}, {cfg['b']}) is not in the G_{ctx.q}-Farey triangle")
    n = parse_count(cfg.get("n", 1))
    if n < 0:
        raise CliError("n must be >= 0")
    table = Table("orbit", ["step", "a", "b", "a_float", "b_float", "region", "k", "roof_float"],
                  meta={"q": ctx.q, "n": n})
    for j, st in enumerate(orbit(ctx, make_point(ctx, a, b), n)):
        p = st.point
        table.append([j, p.a, p.b, float(p.a), float(p.b), st.region_index, st.k, float(st.roof)])
    return table


def stats_mean_roof(cfg) -> Table:
    ctx = context_for(cfg)
    method = cfg["method"]
    if method not in ("quadrature", "montecarlo"):
        raise CliError(f"unknown method {method!r}")
    meta = {"q": ctx.q, "method": method}
    if method == "montecarlo":
        if cfg.get("seed") is None:
            raise CliError("--seed is required for Monte Carlo")
        n = parse_count(cfg["samples"])
        res = stats.mean_roof(ctx, "montecarlo", n=n, seed=int(cfg["seed"]),
                              threads=threads_for(cfg))
        meta.update(samples=n, seed=int(cfg["seed"]), cap=stats.ROOF_CAP, tail=res.tail)
    else:
        tol = float(cfg["tol"])
        res = stats.mean_roof(ctx, "quadrature", tol=tol)
        meta["tol"] = tol
    meta["error_bound"] = res.error_bound
    return Table("mean-roof", ["q", "method", "value", "error_bound"],
                 [[ctx.q, method, res.value, res.error_bound]], meta)


def stats_distribution(cfg, statistic) -> Table:
    ctx = context_for(cfg)
    if cfg.get("seed") is None:
        raise CliError("--seed is required for Monte Carlo")
    grid = parse_grid(cfg["grid"])
    n = parse_count(cfg["samples"])
    seed = int(cfg["seed"])
    lim = stats.limiting_dist(ctx, statistic, grid, n, seed, threads=threads_for(cfg))
    se = np.sqrt(lim.values * (1 - lim.values) / n)
    columns = ["t", "limiting", "limiting_se"]
    meta = {"q": ctx.q, "statistic": statistic, "samples": n, "seed": seed,
            "max_standard_error": lim.meta["max_standard_error"]}
    emp = None
    if cfg.get("empirical_tau") is not None:
        tau = parse_exact(ctx, cfg["empirical_tau"])
        lo, hi = parse_interval(ctx, cfg["interval"])
        emp = stats.empirical_dist(ctx, statistic, tau, (lo, hi), grid)
        columns.append("empirical")
        meta.update(tau=tau, interval=[lo, hi], sweep_count=emp.meta["count"],
                    sup_distance=stats.sup_distance(emp, lim))
    table = Table(statistic, columns, meta=meta)
    for j, t in enumerate(grid):
        row = [float(t), float(lim.values[j]), float(se[j])]
        if emp is not None:
            row.append(float(emp.values[j]))
        table.append(row)
    return table


def stats_count_triangle(cfg) -> Table:
    ctx = context_for(cfg)
    tau = positive_tau(ctx, cfg)
    e1 = parse_pair(ctx, cfg.get("e1") or "1,0")
    e2 = parse_pair(ctx, cfg.get("e2") or "1,1")
    region = stats.TriangleRegion(e1, e2, not cfg.get("open_e1", False),
                                  not cfg.get("open_e2", False), not cfg.get("open_far", False))
    try:
        count, predicted = stats.count_in_triangle(ctx, region, tau)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    return Table("count-triangle", ["q", "tau", "count", "predicted", "ratio"],
                 [[ctx.q, tau, count, predicted, count / predicted]],
                 {"q": ctx.q, "tau": tau, "e1": list(e1), "e2": list(e2)})


def stats_square_equi(cfg) -> Table:
    ctx = context_for(cfg)
    tau = positive_tau(ctx, cfg)
    n = parse_count(cfg["grid_n"])
    try:
        counts, chi2, pts = stats.square_equidistribution(ctx, tau, n, return_points=True)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    expected = counts.sum() / n ** 2
    table = Table("square-equi", ["row", "col", "count", "relative_deviation"],
                  meta={"q": ctx.q, "tau": tau, "grid_n": n, "chi2": chi2,
                        "total": int(counts.sum()),
                        "max_relative_deviation": float(np.abs(counts - expected).max() / expected)})
    for r in range(n):
        for c in range(n):
            table.append([r, c, int(counts[r, c]), float((counts[r, c] - expected) / expected)])
    if cfg.get("svg"):
        fpts = [(float(x) / float(tau), float(y) / float(tau)) for x, y in pts]
        _write_file(cfg["svg"], points_svg(fpts, 1.0, title=f"Lambda_{ctx.q} / {float(tau):g}"))
    return table


def stats_ford_svg(cfg) -> str:
    ctx = context_for(cfg)
    tau = positive_tau(ctx, cfg)
    if sign(tau - 1) < 0:
        raise CliError("tau must be >= 1")
    lo, hi = parse_interval(ctx, cfg["interval"])
    chain = stats.ford_circles(ctx, tau, (lo, hi))
    if chain.overlaps:
        raise CliError("overlapping Ford circles: arithmetic inconsistency")
    return ford_svg(chain.circles, (float(lo), float(hi)), width=int(cfg["width"]),
                    title=f"Ford circles, q={ctx.q}, tau={float(tau):g}")


def stats_dirichlet(cfg) -> Table:
    ctx = context_for(cfg)
    if cfg.get("alpha") is None:
        raise CliError("dirichlet needs --alpha")
    alpha = parse_exact(ctx, cfg["alpha"])
    count = parse_count(cfg["count"])
    res = dirichlet_descent(ctx, alpha, count)
    table = Table("dirichlet", ["index", "x_exact", "y_exact", "x_float", "y_float",
                                "error_float", "bound_float", "pass", "exact"],
                  meta={"q": ctx.q, "alpha": alpha, "count": count, "flagged": res.flagged})
    rows = list(res.approximants) + ([res.exact] if res.exact is not None else [])
    for j, v in enumerate(rows):
        err = abs(alpha - v.y / v.x)
        bound = 1 / (2 * v.x * v.x)
        table.append([j, v.x, v.y, float(v.x), float(v.y), float(err), float(bound),
                      sign(bound - err) >= 0, v is res.exact])
    return table


def cmd_selftest(cfg) -> Table:
    from .selftest import run_selftest

    table = Table("selftest", ["check", "ok", "detail"])
    for name, ok, detail in run_selftest():
        table.append([name, ok, detail])
    return table


STATS = {
    "mean-roof": stats_mean_roof,
    "slope-gap": lambda cfg: stats_distribution(cfg, "slope_gap"),
    "cent-dist": lambda cfg: stats_distribution(cfg, "cent_dist"),
    "count-triangle": stats_count_triangle,
    "square-equi": stats_square_equi,
    "ford-svg": stats_ford_svg,
    "dirichlet": stats_dirichlet,
}


# -- argument parser ------------------------------------------------------------------

def _common(p, *names):
    # defaults stay None so that config values can fill the gaps
    spec = {
        "q": dict(type=int, help="Hecke parameter q >= 3"),
        "tau": dict(help="strip width"),
        "interval": dict(help="slope interval lo,hi (closed)"),
        "seed": dict(type=int, help="random seed (required for Monte Carlo)"),
        "samples": dict(help="Monte Carlo sample count"),
        "threads": dict(type=int, help="worker threads (default $HECKEBCZ_THREADS or 1)"),
        "grid": dict(help="t grid start:step:stop or comma list"),
    }
    for n in names:
        p.add_argument(f"--{n}", **spec[n])


def _io(p, formats=("csv", "json")):
    p.add_argument("--format", choices=formats)
    p.add_argument("--output", "-o", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="heckebcz", description=__doc__.split("\n\n")[0])
    ap.add_argument("--config", help="JSON file with default settings")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="vectors of the strip in slope order")
    _common(p, "q", "tau", "interval")
    _io(p)

    p = sub.add_parser("orbit", help="iterate the BCZ map")
    _common(p, "q")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--n")
    _io(p)

    p = sub.add_parser("stats", help="statistical applications")
    ssub = p.add_subparsers(dest="stat", required=True)

    s = ssub.add_parser("mean-roof")
    _common(s, "q", "seed", "samples", "threads")
    s.add_argument("--method", choices=["quadrature", "montecarlo"])
    s.add_argument("--tol", type=float)
    _io(s)

    for name in ("slope-gap", "cent-dist"):
        s = ssub.add_parser(name)
        _common(s, "q", "seed", "samples", "threads", "grid", "interval")
        s.add_argument("--empirical-tau", dest="empirical_tau",
                       help="also tabulate the sweep over the strip of this width")
        _io(s)

    s = ssub.add_parser("count-triangle")
    _common(s, "q", "tau")
    s.add_argument("--e1", help="first edge vector x,y (default 1,0)")
    s.add_argument("--e2", help="second edge vector x,y (default 1,1)")
    for side in ("e1", "e2", "far"):
        s.add_argument(f"--open-{side}", dest=f"open_{side}", action="store_true", default=None)
    _io(s)

    s = ssub.add_parser("square-equi")
    _common(s, "q", "tau")
    s.add_argument("--grid-n", dest="grid_n")
    s.add_argument("--svg", help="also write the point cloud as SVG")
    _io(s)

    s = ssub.add_parser("ford-svg")
    _common(s, "q", "tau", "interval")
    s.add_argument("--width", type=int)
    s.add_argument("--output", "-o", help="output path (default stdout)")

    s = ssub.add_parser("dirichlet")
    _common(s, "q")
    s.add_argument("--alpha")
    s.add_argument("--count")
    _io(s)

    p = sub.add_parser("selftest", help="quick internal consistency checks")
    _io(p)
    return ap


def _write_file(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from None


def _emit(cfg, text, stdout):
    path = cfg.get("output") or "-"
    if path == "-":
        stdout.write(text)
    else:
        _write_file(path, text)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve(args, load_config(args.config))
        if args.command == "stats":
            result = STATS[args.stat](cfg)
        elif args.command == "enumerate":
            result = cmd_enumerate(cfg)
        elif args.command == "orbit":
            result = cmd_orbit(cfg)
        else:
            result = cmd_selftest(cfg)
        if isinstance(result, str):
            _emit(cfg, result, stdout)
        else:
            fmt_ = cfg["format"]
            if fmt_ not in ("csv", "json"):
                raise CliError(f"format {fmt_!r} is not available for this command")
            _emit(cfg, result.to_json() if fmt_ == "json" else result.to_csv(), stdout)
        if args.command == "selftest" and not all(r[1] for r in result.rows):
            stderr.write("selftest failed\n")
            return 1
    except CliError as exc:
        stderr.write(f"heckebcz: error: {exc}\n")
        return 2
    except (ValueError, ArithmeticError) as exc:
        stderr.write(f"heckebcz: error: {exc}\n")
        return 2
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
