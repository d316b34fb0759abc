"""Exact arithmetic in the real field Q(lambda_q), lambda_q = 2 cos(pi/q).

Elements are stored as coefficient vectors over the power basis
1, lambda, ..., lambda^(d-1) with rational (``gmpy2.mpq``) entries, which
keeps every value canonical without explicit gcd bookkeeping.  Signs are
decided by a floating point filter backed by exact rational interval
evaluation over a certified enclosure of lambda_q.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import sympy
from gmpy2 import mpq, mpz

__all__ = [
    "AlgNum",
    "HeckeField",
    "hecke_field",
    "recurrence_polys",
    "sign",
    "floor_ratio",
    "approx",
]

# relative error budget of the float filter; well above the accumulated
# rounding of a length-d dot product in double precision
_FILTER_REL = 2.0 ** -44
_FILTER_ABS = 1e-290


def recurrence_polys(n):
    """Integer polynomials p_0..p_n with p_0 = 0, p_1 = 1, p_{i+1} = x p_i - p_{i-1}.

    Coefficient lists are lowest degree first.
    """
    polys = [[0], [1]]
    while len(polys) <= n:
        prev, cur = polys[-2], polys[-1]
        nxt = [0] + cur
        for k, c in enumerate(prev):
            nxt[k] -= c
        while len(nxt) > 1 and nxt[-1] == 0:
            nxt.pop()
        polys.append(nxt)
    return polys[: n + 1]


def _poly_eval(coeffs, x):
    acc = mpq(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


class HeckeField:
    """The number field Q(2 cos(pi/q)) with its arithmetic tables."""

    def __init__(self, q: int):
        if q < 3:
            raise ValueError(f"q must be >= 3, got {q}")
        self.q = q
        self.minpoly = self._minimal_polynomial(q)
        self.degree = len(self.minpoly) - 1
        d = self.degree
        # lambda^k in the power basis for k < 2d - 1 (reduction table for products)
        table = []
        for k in range(max(2 * d - 1, 1)):
            if k < d:
                row = [0] * d
                row[k] = 1
            else:
                prev = table[-1]
                top = prev[-1]
                row = [0] + prev[:-1]
                for j in range(d):
                    row[j] -= top * self.minpoly[j]
            table.append(row)
        self._pow_table = [tuple(mpz(v) for v in row) for row in table]
        self._lam_float = 2.0 * math.cos(math.pi / q)
        self._lam_pows = tuple(self._lam_float ** k for k in range(d))
        self._enclosures: dict[int, tuple[mpq, mpq]] = {}
        self.zero = AlgNum(self, (mpq(0),) * d)
        self.one = self.from_rational(1)
        self.lam = AlgNum(self, tuple(mpq(1 if k == 1 else 0) for k in range(d))) if d > 1 \
            else self.from_rational(self._rational_lambda())

    def __repr__(self):
        return f"HeckeField(q={self.q}, minpoly={self.minpoly})"

    def __reduce__(self):
        return (hecke_field, (self.q,))

    # -- construction -----------------------------------------------------

    @staticmethod
    def _minimal_polynomial(q):
        x = sympy.Symbol("x")
        p_q = recurrence_polys(q)[q]
        poly = sympy.Poly(list(reversed(p_q)), x)
        target = 2.0 * math.cos(math.pi / q)
        # roots 2cos(k pi/q) are separated by more than 1/q^2
        eps = Fraction(1, 16 * q * q)
        lo, hi = Fraction(target) - eps, Fraction(target) + eps
        _, factors = poly.factor_list()
        chosen = None
        for fac, _mult in factors:
            if fac.degree() < 1:
                continue
            coeffs = [int(c) for c in reversed(fac.all_coeffs())]
            if coeffs[-1] < 0:
                coeffs = [-c for c in coeffs]
            f_lo = _poly_eval(coeffs, mpq(lo))
            f_hi = _poly_eval(coeffs, mpq(hi))
            if f_lo == 0 or f_hi == 0 or (f_lo < 0) != (f_hi < 0):
                chosen = coeffs
                break
        if chosen is None:  # pragma: no cover - would mean the factorisation is wrong
            raise ArithmeticError(f"no factor of p_{q} vanishes near 2cos(pi/{q})")
        if chosen[-1] != 1:  # pragma: no cover
            raise ArithmeticError("minimal polynomial is expected to be monic")
        return tuple(chosen)

    def _rational_lambda(self):
        # degree one: x - c
        return mpq(-self.minpoly[0])

    def enclosure(self, bits: int) -> tuple[mpq, mpq]:
        """Rational interval of width <= 2^-bits containing lambda_q."""
        got = self._enclosures.get(bits)
        if got is not None:
            return got
        if self.degree == 1:
            lam = self._rational_lambda()
            self._enclosures[bits] = (lam, lam)
            return lam, lam
        eps = mpq(1, 16 * self.q * self.q)
        lo = mpq(Fraction(self._lam_float)) - eps
        hi = mpq(Fraction(self._lam_float)) + eps
        f_lo = _poly_eval(self.minpoly, lo)
        width = mpq(1, 2 ** bits)
        while hi - lo > width:
            mid = (lo + hi) / 2
            f_mid = _poly_eval(self.minpoly, mid)
            if f_mid == 0:
                lo = hi = mid
                break
            if (f_mid < 0) == (f_lo < 0):
                lo, f_lo = mid, f_mid
            else:
                hi = mid
        self._enclosures[bits] = (lo, hi)
        return lo, hi

    # -- element construction -------------------------------------------

    def from_rational(self, r) -> AlgNum:
        return AlgNum(self, (mpq(r),) + (mpq(0),) * (self.degree - 1))

    def from_coeffs(self, coeffs, denom=1) -> AlgNum:
        """Element sum(coeffs[k] lambda^k) / denom; shorter lists are zero padded."""
        coeffs = list(coeffs)
        if len(coeffs) > self.degree:
            # reduce higher powers through the table
            acc = [mpq(0)] * self.degree
            for k, c in enumerate(coeffs):
                row = self._power(k)
                for j in range(self.degree):
                    acc[j] += c * row[j]
            coeffs = acc
        coeffs = coeffs + [0] * (self.degree - len(coeffs))
        den = mpq(denom)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return AlgNum(self, tuple(mpq(c) / den for c in coeffs))

    def _power(self, k):
        if k < len(self._pow_table):
            return self._pow_table[k]
        row = list(self._pow_table[-1])
        for _ in range(k - len(self._pow_table) + 1):
            top = row[-1]
            row = [0] + row[:-1]
            for j in range(self.degree):
                row[j] -= top * self.minpoly[j]
        return row

    def coerce(self, value) -> AlgNum:
        if isinstance(value, AlgNum):
            if value.field is not self:
                raise TypeError("elements of different Hecke fields")
            return value
        if isinstance(value, (int, Rational)) or type(value).__name__ == "mpq":
            return self.from_rational(value)
        raise TypeError(f"cannot embed {type(value).__name__} exactly into Q(lambda_{self.q})")

    def parse(self, text: str) -> AlgNum:
        """Parse ``"c0,c1,.../den"``, a plain rational such as ``"3/4"``, or a decimal."""
        text = text.strip()
        if "," in text:
            num, _, den = text.partition("/")
            coeffs = [int(c) for c in num.split(",")]
            return self.from_coeffs(coeffs, int(den) if den else 1)
        return self.from_rational(Fraction(text))


@lru_cache(maxsize=None)
def hecke_field(q: int) -> HeckeField:
    return HeckeField(q)


class AlgNum:
    """An exact element of Q(lambda_q)."""

    __slots__ = ("field", "c")

    def __init__(self, field: HeckeField, c: tuple):
        self.field = field
        self.c = c

    # -- canonical integer form --------------------------------------------

    @property
    def denom(self) -> int:
        den = 1
        for v in self.c:
            den = math.lcm(den, int(v.denominator))
        return den

    @property
    def coeffs(self) -> tuple[int, ...]:
        den = self.denom
        return tuple(int(v * den) for v in self.c)

    def serialize(self) -> str:
        """``"c0,c1,.../den"`` with integer coefficients over the common denominator."""
        return ",".join(str(v) for v in self.coeffs) + f"/{self.denom}"

    def __repr__(self):
        if self.field.degree == 1:
            return f"AlgNum({self.c[0]})"
        terms = []
        for k, v in enumerate(self.c):
            if v:
                terms.append(f"{v}" if k == 0 else f"{v}*l^{k}" if k > 1 else f"{v}*l")
        return f"AlgNum(q={self.field.q}: {' + '.join(terms) or '0'})"

    # -- ring operations ---------------------------------------------------

    def _other(self, other):
        if isinstance(other, AlgNum):
            if other.field is not self.field:
                raise TypeError("elements of different Hecke fields")
            return other
        return self.field.coerce(other)

    def __add__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return AlgNum(self.field, tuple(x + y for x, y in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return AlgNum(self.field, tuple(x - y for x, y in zip(self.c, o.c)))

    def __rsub__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __neg__(self):
        return AlgNum(self.field, tuple(-x for x in self.c))

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, AlgNum):
            if other.field is not self.field:
                raise TypeError("elements of different Hecke fields")
        else:
            if isinstance(other, (int, Rational)) or type(other).__name__ == "mpq":
                r = mpq(other)
                return AlgNum(self.field, tuple(x * r for x in self.c))
            return NotImplemented
        a, b = self.c, other.c
        d = len(a)
        if d == 1:
            return AlgNum(self.field, (a[0] * b[0],))
        prod = [mpq(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:d]
        table = self.field._pow_table
        for k in range(d, 2 * d - 1):
            v = prod[k]
            if v:
                row = table[k]
                for j in range(d):
                    if row[j]:
                        out[j] += v * row[j]
        return AlgNum(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> AlgNum:
        d = len(self.c)
        if d == 1:
            if not self.c[0]:
                raise ZeroDivisionError("division by zero in Q(lambda)")
            return AlgNum(self.field, (1 / self.c[0],))
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(lambda)")
        # columns of the multiplication-by-self matrix: self * lambda^j
        cols = []
        cur = self
        lam = self.field.lam
        for _ in range(d):
            cols.append(cur.c)
            cur = cur * lam
        # solve M y = e_0 by Gauss-Jordan elimination over Q
        m = [[cols[j][i] for j in range(d)] + [mpq(1 if i == 0 else 0)] for i in range(d)]
        for col in range(d):
            piv = next(r for r in range(col, d) if m[r][col])
            m[col], m[piv] = m[piv], m[col]
            pv = m[col][col]
            m[col] = [v / pv for v in m[col]]
            for r in range(d):
                if r != col and m[r][col]:
                    f = m[r][col]
                    m[r] = [v - f * w for v, w in zip(m[r], m[col])]
        return AlgNum(self.field, tuple(m[i][d] for i in range(d)))

    def __truediv__(self, other):
        if isinstance(other, AlgNum):
            return self * self._other(other).inverse()
        if isinstance(other, (int, Rational)) or type(other).__name__ == "mpq":
            r = mpq(other)
            if not r:
                raise ZeroDivisionError("division by zero in Q(lambda)")
            return AlgNum(self.field, tuple(x / r for x in self.c))
        return NotImplemented

    def __rtruediv__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparisons ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.c)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, AlgNum):
            return other.field is self.field and other.c == self.c
        try:
            return self.c == self.field.coerce(other).c
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if len(self.c) == 1 or not any(self.c[1:]):
            return hash(self.c[0])
        return hash((self.field.q, self.c))

    def sign(self) -> int:
        return sign(self)

    def __lt__(self, other):
        return sign(self - other) < 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def __float__(self):
        c = self.c
        if len(c) == 1:
            return float(c[0])
        return math.fsum(float(v) * p for v, p in zip(c, self.field._lam_pows))

    def __abs__(self):
        return -self if sign(self) < 0 else self

    def __floor__(self):
        return floor_ratio(self, self.field.one)

    def is_rational(self) -> bool:
        return not any(self.c[1:])


def _interval_eval(c, lo, hi):
    """Interval enclosure of sum c_k x^k for x in [lo, hi] with 0 < lo."""
    low = high = mpq(0)
    plo = phi = mpq(1)
    for v in c:
        if v > 0:
            low += v * plo
            high += v * phi
        elif v < 0:
            low += v * phi
            high += v * plo
        plo *= lo
        phi *= hi
    return low, high


def sign(a: AlgNum) -> int:
    """Exact sign of ``a``."""
    c = a.c
    if len(c) == 1:
        v = c[0]
        return (v > 0) - (v < 0)
    if not any(c):
        return 0
    try:
        terms = [float(v) * p for v, p in zip(c, a.field._lam_pows)]
        total = math.fsum(terms)
        bound = _FILTER_REL * math.fsum(abs(t) for t in terms) + _FILTER_ABS
        if total > bound:
            return 1
        if total < -bound:
            return -1
    except OverflowError:
        pass
    bits = 64
    while True:
        lo, hi = a.field.enclosure(bits)
        low, high = _interval_eval(c, lo, hi)
        if low > 0:
            return 1
        if high < 0:
            return -1
        # a nonzero canonical element is nonzero as a real number, so this ends
        bits *= 2


def approx(a: AlgNum, precision_bits: int = 53) -> tuple[Fraction, Fraction]:
    """Certified rational interval around ``a`` with relative width <= 2^-precision_bits."""
    if precision_bits < 16:
        raise ValueError("precision_bits must be >= 16")
    if a.is_zero():
        return Fraction(0), Fraction(0)
    if len(a.c) == 1:
        v = Fraction(int(a.c[0].numerator), int(a.c[0].denominator))
        return v, v
    target = mpq(1, 2 ** precision_bits)
    bits = precision_bits + 8
    while True:
        lo, hi = a.field.enclosure(bits)
        low, high = _interval_eval(a.c, lo, hi)
        scale = max(mpq(1), abs(low), abs(high))
        if high - low <= target * scale:
            return (Fraction(int(low.numerator), int(low.denominator)),
                    Fraction(int(high.numerator), int(high.denominator)))
        bits *= 2


def floor_ratio(num, den) -> int:
    """Exact floor(num / den) for ``den > 0``."""
    if not isinstance(num, AlgNum):
        num = den.field.coerce(num)
    if not isinstance(den, AlgNum):
        den = num.field.coerce(den)
    if len(num.c) == 1:
        if den.c[0] <= 0:
            raise ValueError("floor_ratio requires a positive denominator")
        return math.floor(num.c[0] / den.c[0])
    if sign(den) <= 0:
        raise ValueError("floor_ratio requires a positive denominator")
    try:
        guess = math.floor(float(num) / float(den))
    except (OverflowError, ZeroDivisionError, ValueError):
        lo_n, hi_n = approx(num, 64)
        lo_d, hi_d = approx(den, 64)
        guess = math.floor((lo_n + hi_n) / (lo_d + hi_d))
    n = guess
    # smallest n with num - (n + 1) den < 0 and num - n den >= 0
    while sign(num - den * n) < 0:
        n -= 1
    while sign(num - den * (n + 1)) >= 0:
        n += 1
    return n
