"""Spherical four-bar (4R) position, velocity and acceleration analysis.

All joint axes pass through the centre of a unit sphere.  The input link
rotates by ``theta`` about ``x1``, the output link by ``phi`` about
``x4``; the coupler keeps the angular distance ``alpha2`` between the
moving joints ``r2 = R(theta, x1) x2`` and ``r3 = R(phi, x4) x3``.

Every routine accepts ``theta`` as a :class:`~dualkin.dual2.Dual2`, so
seeding it with ``seed_variable(theta)`` returns first and second
derivatives with respect to the input angle alongside the values.

Conventions
-----------
Azimuths about ``x1`` are measured in the right-handed basis ``(e1, e2)``
with ``e1`` pointing from ``x1`` toward ``x4``; azimuths about ``x4`` in
``(h1, h2)`` with ``h1`` pointing from ``x4`` toward ``x1`` and
``h2 = x4 x h1``.  In these bases the closure condition reads
``B cos s - A sin s + C = 0`` and its roots are
``s = 2 atan2(A + b sqrt(A^2 + B^2 - C^2), C - B)`` with ``b`` the branch
sign.  On branch ``b`` one has ``dF/dphi = b sqrt(disc)`` and
``det(x4, r2, r3) = -b sqrt(disc)``.
"""

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from . import dual2 as d2
from .dual2 import Dual2, seed_constant, seed_variable
from .errors import (
    AssemblyImpossible,
    BranchSingularity,
    NewtonDivergence,
    NoAssembly,
    NotOnConstraint,
    SingularJacobian,
)
from .linalg import DVec3, cross_dual, dot_dual, normalize_dual, rotate_dual

__all__ = [
    "FourBarParams",
    "AssemblyFrame",
    "KinematicSample",
    "assemble",
    "discriminant",
    "output_angle_closed",
    "coupler_residual",
    "output_angle_newton",
    "dphi_implicit",
    "r2_dual",
    "r3_dual",
    "coupler_point_dual",
    "coupler_curve_dual",
    "kinematics",
    "feasible",
    "wrap_angle",
]

UNIT_TOL = 1e-9
CLOSURE_TOL = 1e-10
DISC_EPS = 1e-12
NEWTON_TOL = 1e-13
NEWTON_MAXITER = 50
JACOBIAN_EPS = 1e-12
CONSTRAINT_TOL = 1e-9
HALF_PI = seed_constant(math.pi / 2)


def wrap_angle(x):
    """Map an angle to ``[-pi, pi]``."""
    return math.remainder(x, 2.0 * math.pi)


def _wrap_dual(phi):
    w = wrap_angle(phi[0])
    if w == phi[0]:
        return phi
    return Dual2(w, phi[1], phi[2])


def _unit(v, name):
    a = np.asarray(v, dtype=float).reshape(3)
    n = np.linalg.norm(a)
    if abs(n - 1.0) > UNIT_TOL:
        raise ValueError(f"{name} must be a unit vector (norm {n!r})")
    return a


@dataclass(frozen=True)
class FourBarParams:
    """Mechanism definition; link lengths and angles in radians."""

    x1: tuple
    x4: tuple
    alpha1: float
    alpha2: float
    alpha3: float
    beta: float = 0.0
    gamma: float = 0.0
    theta0: float = 0.0
    branch_sign: int = 1

    def __post_init__(self):
        x1 = _unit(self.x1, "x1")
        x4 = _unit(self.x4, "x4")
        object.__setattr__(self, "x1", tuple(float(c) for c in x1))
        object.__setattr__(self, "x4", tuple(float(c) for c in x4))
        if np.linalg.norm(np.cross(x1, x4)) < 1e-9:
            raise ValueError("x1 and x4 must not be parallel")
        for name in ("alpha1", "alpha2", "alpha3"):
            a = getattr(self, name)
            if not 0.0 < a < math.pi:
                raise ValueError(f"{name}={a!r} must lie in (0, pi)")
        if self.branch_sign not in (1, -1):
            raise ValueError(f"branch_sign must be +1 or -1, got {self.branch_sign!r}")

    @property
    def alpha4(self):
        return math.acos(max(-1.0, min(1.0, float(np.dot(self.x1, self.x4)))))

    def replace(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class AssemblyFrame:
    """Initial joint positions and reference bases derived from the parameters."""

    x2: np.ndarray
    x3: np.ndarray
    alpha4: float
    phi0: float
    e1: np.ndarray
    e2: np.ndarray
    h1: np.ndarray
    h2: np.ndarray
    x1: np.ndarray = field(repr=False)
    x4: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("x1", "x2", "x3", "x4", "e1", "e2", "h1", "h2"):
            a = np.array(getattr(self, name), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    # constant dual copies, built once per frame
    @cached_property
    def _dx1(self):
        return DVec3.constant(self.x1)

    @cached_property
    def _dx2(self):
        return DVec3.constant(self.x2)

    @cached_property
    def _dx3(self):
        return DVec3.constant(self.x3)

    @cached_property
    def _dx4(self):
        return DVec3.constant(self.x4)


@dataclass(frozen=True)
class KinematicSample:
    theta: float
    r_gen: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray
    phi: float
    dphi: float
    ddphi: float


def _normalize(v):
    return v / np.linalg.norm(v)


def assemble(params):
    """Build the assembly configuration at input angle ``params.theta0``.

    ``x3`` is the intersection of the circle of angular radius ``alpha3``
    about ``x4`` with the circle of angular radius ``alpha2`` about ``x2``;
    ``branch_sign`` picks the one with ``det(x4, x2, x3)`` of sign
    ``-branch_sign``, which is the root the closed form selects.
    """
    x1 = np.array(params.x1)
    x4 = np.array(params.x4)
    a1, a2, a3 = params.alpha1, params.alpha2, params.alpha3
    c14 = float(x1 @ x4)
    alpha4 = math.acos(max(-1.0, min(1.0, c14)))

    e1 = _normalize(x4 - c14 * x1)
    e2 = np.cross(x1, e1)
    t0 = params.theta0
    x2 = math.cos(a1) * x1 + math.sin(a1) * (math.cos(t0) * e1 + math.sin(t0) * e2)

    # x3 = p x4 + q x2 + s n with n normal to the x2-x4 plane
    c24 = float(x2 @ x4)
    n = np.cross(x4, x2)
    s24 = np.linalg.norm(n)
    if s24 < 1e-12:
        raise AssemblyImpossible(
            "x2 coincides with +/-x4; the two joint circles are concentric and x3 is not unique"
        )
    n /= s24
    ca2, ca3 = math.cos(a2), math.cos(a3)
    if abs(ca2 - c24 * ca3) > s24 * math.sin(a3):
        raise AssemblyImpossible(
            f"coupler alpha2={a2!r} cannot bridge x2 and the output circle "
            f"(|cos a2 - cos d cos a3| = {abs(ca2 - c24 * ca3):.6g} > "
            f"sin d sin a3 = {s24 * math.sin(a3):.6g})"
        )
    det = 1.0 - c24 * c24
    p = (ca3 - c24 * ca2) / det
    q = (ca2 - c24 * ca3) / det
    rem = 1.0 - (p * p + q * q + 2.0 * p * q * c24)
    x3 = p * x4 + q * x2 - params.branch_sign * math.sqrt(max(rem, 0.0)) * n
    x3 = _normalize(x3)

    h1 = _normalize(x1 - c14 * x4)
    h2 = np.cross(x4, h1)
    phi0 = math.atan2(float(x3 @ h2), float(x3 @ h1))

    frame = AssemblyFrame(x2=x2, x3=x3, alpha4=alpha4, phi0=phi0, e1=e1, e2=e2, h1=h1, h2=h2, x1=x1, x4=x4)
    _check_closure(params, frame)
    return frame


def _check_closure(params, frame):
    checks = (
        (frame.x1 @ frame.x2, params.alpha1),
        (frame.x2 @ frame.x3, params.alpha2),
        (frame.x3 @ frame.x4, params.alpha3),
        (frame.x1 @ frame.x4, frame.alpha4),
    )
    for got, alpha in checks:
        if abs(got - math.cos(alpha)) > CLOSURE_TOL:
            raise AssemblyImpossible(f"closure violated: {got!r} vs cos({alpha!r})")


def _as_dual(x):
    return x if isinstance(x, Dual2) else seed_constant(x)


def _abc(theta, params, frame):
    t = _as_dual(theta) + params.theta0
    s1, c1 = math.sin(params.alpha1), math.cos(params.alpha1)
    s3, c3 = math.sin(params.alpha3), math.cos(params.alpha3)
    s4, c4 = math.sin(frame.alpha4), math.cos(frame.alpha4)
    st, ct = d2.sin(t), d2.cos(t)
    a = st * (s1 * s3)
    b = ct * (-s1 * s3 * c4) + c1 * s3 * s4
    c = ct * (s1 * c3 * s4) + (c1 * c3 * c4 - math.cos(params.alpha2))
    return a, b, c


def discriminant(theta, params, frame):
    """``A^2 + B^2 - C^2`` at a real input angle; negative means no assembly."""
    a, b, c = _abc(float(theta), params, frame)
    return a[0] ** 2 + b[0] ** 2 - c[0] ** 2


def feasible(theta, params, frame):
    return discriminant(theta, params, frame) > DISC_EPS


def output_angle_closed(theta, params, frame):
    """Output angle ``phi(theta)`` from the tangent half-angle solution.

    Returns ``{phi, dphi/dtheta, d2phi/dtheta2}`` when ``theta`` is seeded
    with ``{theta, 1, 0}``; ``phi`` is wrapped to ``[-pi, pi]`` and is zero
    at the assembly input angle.
    """
    theta = _as_dual(theta)
    a, b, c = _abc(theta, params, frame)
    disc = a * a + b * b - c * c
    if disc[0] < -DISC_EPS:
        raise NoAssembly(theta[0], disc[0])
    if disc[0] <= DISC_EPS:
        raise BranchSingularity(f"dead-point at theta={theta[0]!r} (discriminant {disc[0]:.3e})")
    root = d2.sqrt(disc) * params.branch_sign
    # both quotients give the same half-angle; use the pair away from 0/0
    num, den = a + root, c - b
    alt_num, alt_den = b + c, a - root
    if abs(num[0]) + abs(den[0]) >= abs(alt_num[0]) + abs(alt_den[0]):
        s = 2.0 * d2.atan2(num, den)
    else:
        s = 2.0 * d2.atan2(alt_num, alt_den)
    return _wrap_dual(s - frame.phi0)


def r2_dual(theta, params, frame):
    return rotate_dual(_as_dual(theta), frame._dx1, frame._dx2)


def r3_dual(phi, params, frame):
    return rotate_dual(_as_dual(phi), frame._dx4, frame._dx3)


def coupler_residual(theta, phi, params, frame):
    """``r2(theta) . r3(phi) - cos(alpha2)``, zero on the constraint."""
    return dot_dual(r2_dual(theta, params, frame), r3_dual(phi, params, frame)) - math.cos(params.alpha2)


def dphi_implicit(theta, phi, params, frame):
    """First and second derivative of ``phi(theta)`` by implicit differentiation.

    Needs only residual evaluations at a solved point ``(theta, phi)``;
    the mixed partial comes from a diagonal seed with both angles varying.
    """
    theta, phi = float(theta), float(phi)
    f_t = coupler_residual(seed_variable(theta), seed_constant(phi), params, frame)
    if abs(f_t[0]) > CONSTRAINT_TOL:
        raise NotOnConstraint(f"|F(theta, phi)| = {abs(f_t[0]):.3e} > {CONSTRAINT_TOL}")
    f_p = coupler_residual(seed_constant(theta), seed_variable(phi), params, frame)
    if abs(f_p[1]) < JACOBIAN_EPS:
        raise SingularJacobian(f"dF/dphi = {f_p[1]:.3e} at theta={theta!r}")
    diag = coupler_residual(seed_variable(theta), seed_variable(phi), params, frame)
    F_t, F_tt = f_t[1], f_t[2]
    F_p, F_pp = f_p[1], f_p[2]
    F_tp = 0.5 * (diag[2] - F_tt - F_pp)
    dphi = -F_t / F_p
    ddphi = -(F_tt + 2.0 * F_tp * dphi + F_pp * dphi * dphi) / F_p
    return dphi, ddphi


def _newton_value(theta0, guess, params, frame, tol, maxiter):
    th = seed_constant(theta0)
    phi = float(guess)
    for _ in range(maxiter):
        f = coupler_residual(th, seed_variable(phi), params, frame)
        if abs(f[0]) < tol:
            if abs(f[1]) < JACOBIAN_EPS:
                raise SingularJacobian(f"dF/dphi = {f[1]:.3e} at the root (dead-point)")
            return phi
        if abs(f[1]) < JACOBIAN_EPS:
            raise SingularJacobian(f"dF/dphi = {f[1]:.3e} during Newton iteration")
        phi -= f[0] / f[1]
    raise NewtonDivergence(f"no convergence to |F| < {tol} in {maxiter} iterations (theta={theta0!r})")


def output_angle_newton(
    theta, params, frame, guess, *, method="implicit", tol=NEWTON_TOL, maxiter=NEWTON_MAXITER
):
    """Solve the closure condition for ``phi`` by Newton's method.

    The value is iterated with ``dF/dphi`` from a dual evaluation. With
    ``method="implicit"`` the derivative slots are then filled exactly
    from :func:`dphi_implicit`; ``method="dual"`` instead keeps iterating
    the whole triple until every slot of the residual vanishes.
    """
    theta = _as_dual(theta)
    phi = _newton_value(theta[0], guess, params, frame, tol, maxiter)
    if method == "implicit":
        dphi, ddphi = dphi_implicit(theta[0], phi, params, frame)
        t1, t2 = theta[1], theta[2]
        out = Dual2(phi, dphi * t1, ddphi * t1 * t1 + dphi * t2)
    elif method == "dual":
        out = _newton_dual(theta, phi, params, frame, maxiter)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _wrap_dual(out)


def _newton_dual(theta, phi, params, frame, maxiter, tol=1e-12):
    jac = coupler_residual(seed_constant(theta[0]), seed_variable(phi), params, frame)[1]
    phi_t = seed_constant(phi)
    for _ in range(maxiter):
        f = coupler_residual(theta, phi_t, params, frame)
        if max(abs(f[0]), abs(f[1]), abs(f[2])) < tol:
            return phi_t
        phi_t = phi_t - f * (1.0 / jac)
    raise NewtonDivergence(f"dual Newton did not converge in {maxiter} iterations")


def _solve_phi(theta, params, frame, solver):
    if solver == "closed":
        return output_angle_closed(theta, params, frame)
    if solver == "newton":
        guess = output_angle_closed(theta[0], params, frame)[0]
        return output_angle_newton(theta, params, frame, guess)
    raise ValueError(f"unknown solver {solver!r}")


def _coupler_axis(theta, params, frame, solver):
    phi = _solve_phi(theta, params, frame, solver)
    r2 = r2_dual(theta, params, frame)
    r3 = r3_dual(phi, params, frame)
    return r2, normalize_dual(cross_dual(r2, r3)), phi


def coupler_point_dual(theta, nu, params, frame, *, solver="newton"):
    """Point on the coupler at angle ``nu`` from ``r2`` toward ``r3``."""
    theta = _as_dual(theta)
    r2, n23, _ = _coupler_axis(theta, params, frame, solver)
    return rotate_dual(_as_dual(nu), n23, r2)


def _curve(theta, params, frame, solver):
    r2, n23, phi = _coupler_axis(theta, params, frame, solver)
    r_beta = rotate_dual(seed_constant(params.beta), n23, r2)
    r_bg = rotate_dual(seed_constant(params.beta + params.gamma), n23, r2)
    return rotate_dual(HALF_PI, r_beta, r_bg), phi


def coupler_curve_dual(theta, params, frame, *, solver="newton"):
    """Coupler-curve point ``r_gen(theta)`` as a dual 3-vector.

    ``r_cp(beta + gamma)`` is turned by a right angle about ``r_cp(beta)``;
    that axis moves with ``theta`` and its derivatives enter the rotation.
    """
    return _curve(_as_dual(theta), params, frame, solver)[0]


def kinematics(theta, theta_dot, theta_ddot, params, frame, *, solver="newton"):
    """Velocity and acceleration of the coupler point for a driven input."""
    g, phi = _curve(seed_variable(theta), params, frame, solver)
    r, dr, ddr = g.value(), g.d1(), g.d2()
    return KinematicSample(
        theta=float(theta),
        r_gen=r,
        velocity=theta_dot * dr,
        acceleration=theta_dot * theta_dot * ddr + theta_ddot * dr,
        phi=phi[0],
        dphi=phi[1],
        ddphi=phi[2],
    )
