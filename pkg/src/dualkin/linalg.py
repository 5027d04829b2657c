"""3-vectors and 3x3 matrices with extended dual entries.

Each component is a :class:`~dualkin.dual2.Dual2`, so a vector carries its
value together with its first and second derivative with respect to the
same independent variable.  :meth:`DVec3.as_array` exposes the
``(component, order)`` layout as a 3x3 float array, column ``k`` holding
derivative order ``k``.
"""

import math
from numbers import Real

import numpy as np

from .dual2 import Dual2, cos, seed_constant, sin, sqrt
from .errors import DegenerateVector, NonUnitAxis

__all__ = [
    "DVec3",
    "DMat3",
    "levi_civita",
    "dot_dual",
    "cross_dual",
    "norm_dual",
    "normalize_dual",
    "rotation_dual",
    "rotate_dual",
    "NORM_EPS",
    "UNIT_AXIS_TOL",
]

NORM_EPS = 1e-12
UNIT_AXIS_TOL = 1e-9

_tuple_new = tuple.__new__


def levi_civita(i, j, k):
    """Alternating symbol for zero-based indices in ``{0, 1, 2}``."""
    return (i - j) * (j - k) * (k - i) // 2


# the six non-vanishing (i, j, k, eps_ijk) entries of the 27-entry tensor
_LEVI_TERMS = tuple(
    (i, j, k, levi_civita(i, j, k))
    for i in range(3)
    for j in range(3)
    for k in range(3)
    if levi_civita(i, j, k) != 0
)


class DVec3(tuple):
    """Immutable 3-vector of :class:`Dual2` components."""

    __slots__ = ()
    __array_ufunc__ = None

    def __new__(cls, x, y, z):
        comps = tuple(c if isinstance(c, Dual2) else seed_constant(c) for c in (x, y, z))
        return _tuple_new(cls, comps)

    @classmethod
    def constant(cls, v):
        """Vector with zero derivative parts."""
        x, y, z = (float(c) for c in v)
        return cls(seed_constant(x), seed_constant(y), seed_constant(z))

    @classmethod
    def from_array(cls, arr):
        """Inverse of :meth:`as_array`: rows are components, columns orders."""
        a = np.asarray(arr, dtype=float)
        if a.shape != (3, 3):
            raise ValueError(f"expected a 3x3 array, got shape {a.shape}")
        return cls(*(Dual2(*row) for row in a))

    def as_array(self):
        return np.array([list(c) for c in self], dtype=float)

    def value(self):
        return np.array([c[0] for c in self])

    def d1(self):
        return np.array([c[1] for c in self])

    def d2(self):
        return np.array([c[2] for c in self])

    def __repr__(self):
        return f"DVec3({self[0]!r}, {self[1]!r}, {self[2]!r})"

    def __getnewargs__(self):
        return tuple(self)

    def __add__(self, other):
        if not isinstance(other, DVec3):
            return NotImplemented
        return _vec(self[0] + other[0], self[1] + other[1], self[2] + other[2])

    def __sub__(self, other):
        if not isinstance(other, DVec3):
            return NotImplemented
        return _vec(self[0] - other[0], self[1] - other[1], self[2] - other[2])

    def __neg__(self):
        return _vec(-self[0], -self[1], -self[2])

    def __mul__(self, scalar):
        # scaling by a Dual2 or a real; vector products are explicit functions
        if isinstance(scalar, (Dual2, Real)):
            return _vec(self[0] * scalar, self[1] * scalar, self[2] * scalar)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, (Dual2, Real)):
            return _vec(self[0] / scalar, self[1] / scalar, self[2] / scalar)
        return NotImplemented


def _vec(x, y, z):
    return _tuple_new(DVec3, (x, y, z))


class DMat3(tuple):
    """Immutable 3x3 matrix stored as three :class:`DVec3` rows."""

    __slots__ = ()
    __array_ufunc__ = None

    def __new__(cls, rows):
        rows = tuple(r if isinstance(r, DVec3) else DVec3(*r) for r in rows)
        if len(rows) != 3:
            raise ValueError("DMat3 needs exactly three rows")
        return _tuple_new(cls, rows)

    @classmethod
    def constant(cls, m):
        return cls([DVec3.constant(row) for row in np.asarray(m, dtype=float)])

    @classmethod
    def identity(cls):
        return cls.constant(np.eye(3))

    def value(self):
        return np.array([r.value() for r in self])

    def d1(self):
        return np.array([r.d1() for r in self])

    def d2(self):
        return np.array([r.d2() for r in self])

    def transpose(self):
        return DMat3([DVec3(*(self[i][j] for i in range(3))) for j in range(3)])

    @property
    def T(self):
        return self.transpose()

    def __repr__(self):
        return "DMat3([\n  " + ",\n  ".join(repr(r) for r in self) + "])"

    def __getnewargs__(self):
        return (tuple(self),)

    def __matmul__(self, other):
        if isinstance(other, DVec3):
            return _vec(*(dot_dual(row, other) for row in self))
        if isinstance(other, DMat3):
            cols = other.transpose()
            return DMat3([_vec(*(dot_dual(row, col) for col in cols)) for row in self])
        return NotImplemented


def dot_dual(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross_dual(a, b):
    """Cross product by contraction with the Levi-Civita tensor."""
    acc = [None, None, None]
    for i, j, k, eps in _LEVI_TERMS:
        term = a[j] * b[k]
        if eps < 0:
            term = -term
        acc[i] = term if acc[i] is None else acc[i] + term
    return _vec(*acc)


def norm_dual(a):
    n2 = dot_dual(a, a)
    if n2[0] <= NORM_EPS * NORM_EPS:
        raise DegenerateVector(f"vector norm {math.sqrt(max(n2[0], 0.0)):.3e} <= {NORM_EPS}")
    return sqrt(n2)


def normalize_dual(a):
    n = norm_dual(a)
    return _vec(a[0] / n, a[1] / n, a[2] / n)


def _check_axis(axis):
    n = math.sqrt(sum(c[0] * c[0] for c in axis))
    if abs(n - 1.0) > UNIT_AXIS_TOL:
        raise NonUnitAxis(f"rotation axis has norm {n!r}, expected 1")


def _as_dvec(v):
    return v if isinstance(v, DVec3) else DVec3.constant(v)


def _as_angle(angle):
    return angle if isinstance(angle, Dual2) else seed_constant(angle)


def rotation_dual(angle, axis):
    """Axis-angle rotation matrix ``c I + s [k]x + (1 - c) k k^T``.

    Both ``angle`` and ``axis`` may carry derivatives.
    """
    angle, axis = _as_angle(angle), _as_dvec(axis)
    _check_axis(axis)
    c, s = cos(angle), sin(angle)
    omc = 1.0 - c
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            entry = omc * axis[i] * axis[j]
            if i == j:
                entry = entry + c
            else:
                # [k]x_ij = eps_ilj k_l with l the remaining index
                l = 3 - i - j
                eps = levi_civita(i, l, j)
                entry = entry + eps * (s * axis[l])
            row.append(entry)
        rows.append(_vec(*row))
    return DMat3(rows)


def rotate_dual(angle, axis, v):
    """Rodrigues rotation of ``v`` about the unit ``axis`` by ``angle``."""
    angle, axis, v = _as_angle(angle), _as_dvec(axis), _as_dvec(v)
    _check_axis(axis)
    c, s = cos(angle), sin(angle)
    kv = dot_dual(axis, v) * (1.0 - c)
    kxv = cross_dual(axis, v)
    return _vec(
        v[0] * c + kxv[0] * s + axis[0] * kv,
        v[1] * c + kxv[1] * s + axis[1] * kv,
        v[2] * c + kxv[2] * s + axis[2] * kv,
    )
