"""Extended dual triples ``{f, f', f''}`` and their arithmetic.

A :class:`Dual2` carries a function value together with its first and
second derivative with respect to a single independent variable.  The
slots hold raw derivatives (not Taylor coefficients), so the product
rule picks up an explicit factor 2 on the cross term::

    >>> x = seed_variable(2.0)
    >>> x * x
    Dual2(val=4.0, d1=4.0, d2=2.0)

Every elementary function goes through :func:`lift`, the second-order
chain rule ``{f(g), f'(g) g', f''(g) g'^2 + f'(g) g''}``, so arbitrary
compositions propagate both derivatives exactly.
"""

import math
from numbers import Real
from operator import itemgetter

from .errors import DerivativeSingularity, DivisionByZeroDual, DomainError, NonFiniteDual

__all__ = [
    "Dual2",
    "seed_variable",
    "seed_constant",
    "lift",
    "sin",
    "cos",
    "tan",
    "asin",
    "acos",
    "atan",
    "atan2",
    "exp",
    "log",
    "ln",
    "sqrt",
    "pow",
    "DIV_EPS",
]

# |denominator| below this raises instead of producing inf
DIV_EPS = 1e-300
# |cos x| below this is treated as a pole of tan
TAN_POLE_EPS = 1e-12

_tuple_new = tuple.__new__


def _make(a, b, c):
    # inf * 0 and nan * 0 are nan; finite * 0 is 0
    if a * 0.0 + b * 0.0 + c * 0.0 != 0.0:
        raise NonFiniteDual(f"non-finite extended dual ({a!r}, {b!r}, {c!r})")
    return _tuple_new(Dual2, (a, b, c))


class Dual2(tuple):
    """Immutable triple ``(val, d1, d2)``: value, first and second derivative.

    Plain reals mix freely with triples in arithmetic and are treated as
    constants ``{c, 0, 0}``.
    """

    __slots__ = ()
    # make numpy scalars defer to our reflected operators
    __array_ufunc__ = None

    def __new__(cls, val, d1=0.0, d2=0.0):
        return _make(float(val), float(d1), float(d2))

    val = property(itemgetter(0), doc="function value")
    d1 = property(itemgetter(1), doc="first derivative")
    d2 = property(itemgetter(2), doc="second derivative")

    def __repr__(self):
        return f"Dual2(val={self[0]!r}, d1={self[1]!r}, d2={self[2]!r})"

    def __getnewargs__(self):
        return tuple(self)

    @property
    def is_constant(self):
        return self[1] == 0.0 and self[2] == 0.0

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        a0, a1, a2 = self
        if isinstance(other, Dual2):
            b0, b1, b2 = other
            return _make(a0 + b0, a1 + b1, a2 + b2)
        if isinstance(other, Real):
            return _make(a0 + float(other), a1, a2)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        a0, a1, a2 = self
        if isinstance(other, Dual2):
            b0, b1, b2 = other
            return _make(a0 - b0, a1 - b1, a2 - b2)
        if isinstance(other, Real):
            return _make(a0 - float(other), a1, a2)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Real):
            a0, a1, a2 = self
            return _make(float(other) - a0, -a1, -a2)
        return NotImplemented

    def __neg__(self):
        a0, a1, a2 = self
        return _tuple_new(Dual2, (-a0, -a1, -a2))

    def __pos__(self):
        return self

    def __mul__(self, other):
        a0, a1, a2 = self
        if isinstance(other, Dual2):
            b0, b1, b2 = other
            return _make(a0 * b0, a0 * b1 + a1 * b0, a0 * b2 + 2.0 * a1 * b1 + a2 * b0)
        if isinstance(other, Real):
            c = float(other)
            return _make(a0 * c, a1 * c, a2 * c)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Real):
            other = _tuple_new(Dual2, (float(other), 0.0, 0.0))
        elif not isinstance(other, Dual2):
            return NotImplemented
        a0, a1, a2 = self
        b0, b1, b2 = other
        if abs(b0) < DIV_EPS:
            raise DivisionByZeroDual(other)
        q0 = a0 / b0
        q1 = (a1 - q0 * b1) / b0
        q2 = (a2 - 2.0 * q1 * b1 - q0 * b2) / b0
        return _make(q0, q1, q2)

    def __rtruediv__(self, other):
        if isinstance(other, Real):
            return _tuple_new(Dual2, (float(other), 0.0, 0.0)) / self
        return NotImplemented

    def __pow__(self, exponent):
        if isinstance(exponent, (Dual2, Real)):
            return pow(self, exponent)
        return NotImplemented

    def __rpow__(self, base):
        if isinstance(base, Real):
            return pow(seed_constant(base), self)
        return NotImplemented

    def __abs__(self):
        return -self if self[0] < 0.0 else self


def seed_variable(x):
    """The independent variable ``{x, 1, 0}``."""
    return Dual2(x, 1.0, 0.0)


def seed_constant(c):
    """A constant ``{c, 0, 0}``."""
    return Dual2(c, 0.0, 0.0)


def _as_dual(g):
    if isinstance(g, Dual2):
        return g
    return seed_constant(g)


def _chain(g1, g2, f, fp, fpp):
    return _make(f, fp * g1, fpp * g1 * g1 + fp * g2)


def lift(g, f, fp, fpp, name=None):
    """Apply the second-order chain rule to a scalar function.

    ``f``, ``fp`` and ``fpp`` are the function and its first two
    derivatives as plain real callables, evaluated at ``g.val``.
    """
    g0, g1, g2 = _as_dual(g)
    name = name or getattr(f, "__name__", "f")
    try:
        return _chain(g1, g2, f(g0), fp(g0), fpp(g0))
    except (ValueError, OverflowError, ZeroDivisionError, NonFiniteDual) as exc:
        raise DomainError(name, g0, str(exc)) from exc


def sin(g):
    g0, g1, g2 = _as_dual(g)
    s, c = math.sin(g0), math.cos(g0)
    return _chain(g1, g2, s, c, -s)


def cos(g):
    g0, g1, g2 = _as_dual(g)
    s, c = math.sin(g0), math.cos(g0)
    return _chain(g1, g2, c, -s, -c)


def tan(g):
    g0, g1, g2 = _as_dual(g)
    if abs(math.cos(g0)) < TAN_POLE_EPS:
        raise DomainError("tan", g0, "pole")
    t = math.tan(g0)
    sec2 = 1.0 + t * t
    return _chain(g1, g2, t, sec2, 2.0 * t * sec2)


def _check_unit_interval(name, x):
    if not -1.0 <= x <= 1.0:
        raise DomainError(name, x, "|x| > 1")
    if abs(x) == 1.0:
        raise DerivativeSingularity(name, x, "derivative unbounded at |x| = 1")


def asin(g):
    g0, g1, g2 = _as_dual(g)
    _check_unit_interval("asin", g0)
    w = 1.0 - g0 * g0
    fp = 1.0 / math.sqrt(w)
    return _chain(g1, g2, math.asin(g0), fp, g0 * fp / w)


def acos(g):
    g0, g1, g2 = _as_dual(g)
    _check_unit_interval("acos", g0)
    w = 1.0 - g0 * g0
    fp = 1.0 / math.sqrt(w)
    return _chain(g1, g2, math.acos(g0), -fp, -g0 * fp / w)


def atan(g):
    g0, g1, g2 = _as_dual(g)
    w = 1.0 / (1.0 + g0 * g0)
    return _chain(g1, g2, math.atan(g0), w, -2.0 * g0 * w * w)


def atan2(y, x):
    """Two-argument arctangent of triples, ``angle(x + i y)``."""
    y0, y1, y2 = _as_dual(y)
    x0, x1, x2 = _as_dual(x)
    den = x0 * x0 + y0 * y0
    if den < DIV_EPS:
        raise DerivativeSingularity("atan2", (y0, x0), "undefined at the origin")
    num = x0 * y1 - y0 * x1
    dnum = x0 * y2 - y0 * x2
    dden = 2.0 * (x0 * x1 + y0 * y1)
    return _make(math.atan2(y0, x0), num / den, (dnum * den - num * dden) / (den * den))


def exp(g):
    g0, g1, g2 = _as_dual(g)
    try:
        e = math.exp(g0)
    except OverflowError as exc:
        raise DomainError("exp", g0, "overflow") from exc
    return _chain(g1, g2, e, e, e)


def log(g):
    g0, g1, g2 = _as_dual(g)
    if not g0 > 0.0:
        raise DomainError("log", g0, "requires x > 0")
    inv = 1.0 / g0
    return _chain(g1, g2, math.log(g0), inv, -inv * inv)


ln = log


def sqrt(g):
    g0, g1, g2 = _as_dual(g)
    if g0 < 0.0:
        raise DomainError("sqrt", g0, "requires x >= 0")
    if g0 == 0.0:
        raise DerivativeSingularity("sqrt", g0, "derivative unbounded at 0")
    r = math.sqrt(g0)
    fp = 0.5 / r
    return _chain(g1, g2, r, fp, -0.5 * fp / g0)


def _int_power(g, n):
    g0, g1, g2 = g
    if n == 0:
        return _make(1.0, 0.0, 0.0)
    if g0 == 0.0 and n < 0:
        raise DivisionByZeroDual(g)
    fp = n * g0 ** (n - 1)
    # n = 1 would evaluate 0 * 0**-1 at the origin
    fpp = n * (n - 1) * g0 ** (n - 2) if n != 1 else 0.0
    return _chain(g1, g2, g0**n, fp, fpp)


def pow(g, e):
    """``g ** e`` for triples.

    A constant integer exponent uses the integer power rule and accepts
    negative bases. Any other exponent requires ``g.val > 0``; a constant
    real exponent goes through :func:`lift` and a varying one through
    ``exp(e * log(g))``.
    """
    g = _as_dual(g)
    e = _as_dual(e)
    p = e[0]
    if e.is_constant:
        if float(p).is_integer():
            return _int_power(g, int(p))
        if not g[0] > 0.0:
            raise DomainError("pow", g[0], "non-integer exponent requires base > 0")
        x0 = g[0]
        return _chain(g[1], g[2], x0**p, p * x0 ** (p - 1.0), p * (p - 1.0) * x0 ** (p - 2.0))
    if not g[0] > 0.0:
        raise DomainError("pow", g[0], "variable exponent requires base > 0")
    return exp(e * log(g))
