import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bfs_strip, farey_size

from heckebcz import (StripSpec, UnimodularPair, children, dirichlet_descent, enumerate_strip,
                      iter_strip, make_context, wedge)
from heckebcz.sternbrocot import find_slope


def test_children_examples():
    c3, c4, c5 = make_context(3), make_context(4), make_context(5)
    root = UnimodularPair(c3.vec(1, 0), c3.vec(0, 1))
    assert children(c3, root) == [c3.vec(1, 1)]
    phi = c5.lam
    kids = children(c5, (c5.vec(1, 0), c5.vec(0, 1)))
    assert [(k.x, k.y) for k in kids] == [(phi, 1), (phi, phi), (1, phi)]
    kids = children(c4, (c4.vec(1, 0), c4.vec(0, 1)))
    assert [(k.x, k.y) for k in kids] == [(c4.lam, 1), (1, c4.lam)]


@pytest.mark.parametrize("q", [3, 5, 8])
def test_children_are_unimodular_chain(q):
    ctx = make_context(q)
    pair = (ctx.vec(3, 2), ctx.vec(1, 1))
    assert wedge(*pair) == 1
    chain = [pair[0]] + children(ctx, pair) + [pair[1]]
    assert all(wedge(u, v) == 1 for u, v in zip(chain, chain[1:]))


def test_unimodular_pair_checked():
    ctx = make_context(3)
    with pytest.raises(ValueError):
        UnimodularPair(ctx.vec(2, 0), ctx.vec(0, 1))


def test_strip_examples():
    c3, c5 = make_context(3), make_context(5)
    got = enumerate_strip(c3, StripSpec(3, 0, 1))
    assert got == [c3.vec(*v) for v in [(1, 0), (3, 1), (2, 1), (3, 2), (1, 1)]]
    # [0, inf) holds every (1, n phi), so only the lazy iterator can take it
    first = list(itertools.islice(iter_strip(c5, StripSpec(1, 0, None)), 3))
    assert first == [c5.vec(1, 0), c5.vec(1, c5.lam), c5.vec(1, c5.lam * 2)]
    assert enumerate_strip(c5, StripSpec(1, 0, 2)) == [c5.vec(1, 0), c5.vec(1, c5.lam)]
    with pytest.raises(ValueError):
        enumerate_strip(c5, StripSpec(1, 0, None))
    for q in (3, 4, 5, 9):
        assert enumerate_strip(make_context(q), StripSpec(Fraction(1, 2), 0, 1)) == []


def test_strip_errors():
    ctx = make_context(4)
    with pytest.raises(ValueError):
        enumerate_strip(ctx, StripSpec(0, 0, 1))
    with pytest.raises(ValueError):
        StripSpec(3, 1, 0)
    with pytest.raises(ValueError):
        enumerate_strip(ctx, StripSpec(3, "1/2", "1/3"))


@pytest.mark.parametrize("q", [3, 4, 5, 6, 7])
@pytest.mark.parametrize("tau", [10, 25])
def test_exhaustive_against_bfs(q, tau):
    ctx = make_context(q)
    got = [(v.x, v.y) for v in enumerate_strip(ctx, StripSpec(tau, 0, 1))]
    assert got == bfs_strip(ctx, tau)


@pytest.mark.parametrize("q", [3, 5, 7])
def test_pairwise_wedge_and_order(q):
    ctx = make_context(q)
    vs = enumerate_strip(ctx, StripSpec(20, 0, 1))
    for u, v in itertools.combinations(vs, 2):
        assert abs(wedge(u, v)) >= 1
    slopes_increase = all(wedge(u, v) > 0 for u, v in zip(vs, vs[1:]))
    assert slopes_increase


def test_farey_cardinality():
    ctx = make_context(3)
    for Q in (1, 2, 3, 10, 50, 100):
        assert len(enumerate_strip(ctx, StripSpec(Q, 0, 1))) == farey_size(Q)


@pytest.mark.parametrize("q", [3, 5, 6])
def test_symmetric_ranges(q):
    ctx = make_context(q)
    pos = enumerate_strip(ctx, StripSpec(12, 0, 2))
    neg = enumerate_strip(ctx, StripSpec(12, -2, 0))
    assert [ctx.vec(0, 0) + type(v)(v.x, -v.y) for v in reversed(pos)] == neg
    both = enumerate_strip(ctx, StripSpec(12, -2, 2))
    assert both == neg + pos[1:]
    assert list(iter_strip(ctx, StripSpec(12, -2, 2))) == both


def test_dirichlet_examples():
    c3, c5 = make_context(3), make_context(5)
    r = dirichlet_descent(c3, Fraction(1, 2), 5)
    assert r.flagged and r.exact == c3.vec(2, 1)
    alpha = Fraction(7050459, 9901099)
    r = dirichlet_descent(c3, alpha, 5)
    assert not r.flagged and len(r.approximants) == 5
    for v in r.approximants:
        x, y = Fraction(int(v.x.c[0])), Fraction(int(v.y.c[0]))
        assert abs(alpha - y / x) <= 1 / (2 * x * x)
    r = dirichlet_descent(c5, 1, 3)
    assert r.flagged and r.exact == c5.fan[2]
    r = dirichlet_descent(c5, Fraction(-3, 7), 4)
    assert all(v.y <= 0 for v in r.approximants) and r.approximants[-1].y < 0
    a = c5.num(Fraction(-3, 7))
    assert all(2 * v.x * v.x * abs(a - v.y / v.x) <= 1 for v in r.approximants)


# the descent walks one sector per unit of each partial quotient, so alpha is
# kept to moderate denominators here; large-denominator alphas are exercised by
# the acceptance suite
@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 4, 5, 7]),
       st.fractions(min_value=Fraction(1, 10**4), max_value=Fraction(10**4 - 1, 10**4),
                    max_denominator=10**4),
       st.integers(min_value=1, max_value=8))
def test_dirichlet_postcondition(q, alpha, count):
    ctx = make_context(q)
    r = dirichlet_descent(ctx, alpha, count)
    a = ctx.num(alpha)
    xs = [v.x for v in r.approximants]
    assert all(u < v for u, v in zip(xs, xs[1:]))
    for v in r.approximants:
        assert 2 * v.x * v.x * abs(a - v.y / v.x) <= 1
    assert r.flagged or len(r.approximants) == count


def test_find_slope():
    c5 = make_context(5)
    for v in enumerate_strip(c5, StripSpec(6, 0, 3))[1:]:
        assert find_slope(c5, v.y / v.x) == v
    # every element of Q(sqrt 5) is a slope for q = 5; 1/2 needs x = 2 + 4 phi
    v = find_slope(c5, Fraction(1, 2), 10**3)
    assert v == c5.vec(0, 0) + type(v)(c5.lam * 4 + 2, c5.lam * 2 + 1)
    assert find_slope(c5, Fraction(1, 2), 3) is None
    c3 = make_context(3)
    rng = random.Random(0)
    for _ in range(20):
        a, b = rng.randrange(1, 100), rng.randrange(1, 100)
        v = find_slope(c3, Fraction(b, a))
        assert v.y / v.x == Fraction(b, a)
