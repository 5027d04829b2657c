"""Exception hierarchy shared by the dual arithmetic and mechanism layers."""


class DualError(ArithmeticError):
    """Base class for failures inside extended dual arithmetic."""


class DivisionByZeroDual(DualError, ZeroDivisionError):
    """Division by a triple whose value part is (numerically) zero."""

    def __init__(self, denominator):
        self.denominator = denominator
        super().__init__(f"division by dual with near-zero value part: {denominator!r}")


class DomainError(DualError, ValueError):
    """Argument outside the real domain of an elementary function."""

    def __init__(self, func, value, reason=""):
        self.func = func
        self.value = value
        msg = f"{func}: argument {value!r} outside domain"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)


class DerivativeSingularity(DomainError):
    """Value lies in the closed domain but a derivative is unbounded there."""


class NonFiniteDual(DualError):
    """An operation produced an infinite or NaN component."""


class DegenerateVector(DualError):
    """Normalization of a vector whose value part has (near) zero length."""


class NonUnitAxis(DualError, ValueError):
    """Rotation axis whose value part is not a unit vector."""


class MechanismError(Exception):
    """Base class for spherical four-bar failures."""


class AssemblyImpossible(MechanismError):
    pass


class NoAssembly(MechanismError):
    """Input angle outside the mobility range of the mechanism."""

    def __init__(self, theta, discriminant):
        self.theta = theta
        self.discriminant = discriminant
        super().__init__(f"no assembly at theta={theta!r} (discriminant {discriminant:.3e} < 0)")


class BranchSingularity(MechanismError):
    """Dead-point: both branches coincide and dphi/dtheta is unbounded."""


class NewtonDivergence(MechanismError):
    pass


class SingularJacobian(MechanismError):
    pass


class NotOnConstraint(MechanismError):
    pass


class EvaluationFailed(Exception):
    """A finite-difference stencil point could not be evaluated."""

    def __init__(self, x, cause):
        self.x = x
        self.cause = cause
        super().__init__(f"evaluation failed at x={x!r}: {cause}")


class ConfigError(Exception):
    pass
