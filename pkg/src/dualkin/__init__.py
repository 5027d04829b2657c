"""Second-order forward-mode AD with extended dual triples, applied to
coupler-point velocity and acceleration of spherical four-bar linkages."""

from .dual2 import Dual2, lift, seed_constant, seed_variable
from .errors import (
    AssemblyImpossible,
    BranchSingularity,
    ConfigError,
    DegenerateVector,
    DerivativeSingularity,
    DivisionByZeroDual,
    DomainError,
    DualError,
    EvaluationFailed,
    MechanismError,
    NewtonDivergence,
    NoAssembly,
    NonFiniteDual,
    NonUnitAxis,
    NotOnConstraint,
    SingularJacobian,
)
from .fourbar import (
    AssemblyFrame,
    FourBarParams,
    KinematicSample,
    assemble,
    coupler_curve_dual,
    coupler_point_dual,
    coupler_residual,
    dphi_implicit,
    kinematics,
    output_angle_closed,
    output_angle_newton,
)
from .linalg import (
    DMat3,
    DVec3,
    cross_dual,
    dot_dual,
    norm_dual,
    normalize_dual,
    rotate_dual,
    rotation_dual,
)
from .verification import ComparisonReport, FDConfig, compare_dual, fd_first, fd_second

__version__ = "0.1.0"
