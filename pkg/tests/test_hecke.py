import mpmath
import pytest

from heckebcz import Mat2, PlaneVec, dot, make_context, qform, wedge


def vecs(ctx, *pairs):
    return [ctx.vec(x, y) for x, y in pairs]


def test_q3_context():
    ctx = make_context(3)
    assert ctx.lam == 1 and ctx.degree == 1
    assert list(ctx.fan[:4]) == vecs(ctx, (1, 0), (1, 1), (0, 1), (-1, 0))


def test_q5_context():
    ctx = make_context(5)
    phi = ctx.lam
    assert ctx.minpoly == (-1, -1, 1)
    expected = [(1, 0), (phi, 1), (phi, phi), (1, phi), (0, 1), (-1, 0)]
    assert list(ctx.fan[:6]) == [PlaneVec(ctx.num(x), ctx.num(y)) for x, y in expected]


def test_q4_context():
    ctx = make_context(4)
    r2 = ctx.lam
    assert ctx.minpoly == (-2, 0, 1)
    assert list(ctx.fan[:4]) == [ctx.vec(1, 0), PlaneVec(r2, ctx.num(1)),
                                 PlaneVec(ctx.num(1), r2), ctx.vec(0, 1)]


@pytest.mark.parametrize("bad", [2, 0, -5, 3.0, "5"])
def test_rejects_bad_q(bad):
    with pytest.raises(ValueError):
        make_context(bad)


@pytest.mark.parametrize("q", range(3, 13))
def test_fan_invariants(q):
    ctx = make_context(q)
    fan = ctx.fan
    assert len(fan) == 2 * q
    assert fan[0] == ctx.vec(1, 0)
    assert fan[1] == PlaneVec(ctx.lam, ctx.num(1))
    assert fan[q - 2] == PlaneVec(ctx.num(1), ctx.lam)
    assert fan[q - 1] == ctx.vec(0, 1)
    assert fan[q] == ctx.vec(-1, 0)
    assert all(qform(ctx, w) == 1 for w in fan)
    assert all(wedge(fan[i], fan[i + 1]) == 1 for i in range(q - 1))
    assert wedge(fan[0], fan[q - 1]) == 1
    U = ctx.U
    assert all(U @ fan[i] == fan[(i + 1) % (2 * q)] for i in range(2 * q))
    assert all(fan[i + q] == -fan[i] for i in range(q))


@pytest.mark.parametrize("q", range(3, 13))
def test_rotation_order(q):
    ctx = make_context(q)
    one, zero = ctx.field.one, ctx.field.zero
    assert ctx.U ** q == Mat2(-one, zero, zero, -one)
    assert ctx.U ** (2 * q) == Mat2(one, zero, zero, one)


def test_group_elements():
    ctx = make_context(7)
    for m in (ctx.S, ctx.T, ctx.U, ctx.h(ctx.lam / 3), ctx.s_tau(5), ctx.g(ctx.lam / 4, 2)):
        assert m.det() == 1
    assert ctx.S @ ctx.S == -(ctx.S ** 0)
    assert ctx.U.inverse() @ ctx.U == ctx.U ** 0
    # h_s shears slope s to zero
    s = ctx.lam / 3
    v = ctx.h(s) @ PlaneVec(ctx.num(3), s * 3)
    assert v.y == 0


def test_products():
    ctx = make_context(5)
    e1, e2 = ctx.vec(1, 0), ctx.vec(0, 1)
    assert wedge(e1, e2) == 1
    assert wedge(ctx.fan[1], ctx.fan[2]) == 1
    assert qform(ctx, ctx.fan[2]) == 1
    assert dot(ctx.fan[1], ctx.fan[3]) == ctx.lam * 2


def test_lambda_interval():
    ctx = make_context(9)
    lo, hi = ctx.lambda_interval
    with mpmath.workdps(40):
        lam = 2 * mpmath.cos(mpmath.pi / 9)
        assert mpmath.mpf(lo.numerator) / lo.denominator <= lam <= mpmath.mpf(hi.numerator) / hi.denominator
    assert hi - lo < 1e-18
