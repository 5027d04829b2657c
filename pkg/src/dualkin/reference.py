"""Published reference mechanism and its velocity/acceleration table.

The mechanism was synthesised for path generation; only the fixed axes,
link lengths and coupler-point angles are published, not the assembly
input angle or the branch.  :func:`search_assembly` scans those two
unknowns and ranks configurations by agreement with the table.
"""

import json
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import MechanismError
from .fourbar import FourBarParams, assemble, kinematics

__all__ = [
    "TABLE1",
    "TABLE2",
    "TABLE2_THETA",
    "table1_params",
    "table1_path",
    "AssemblyMatch",
    "search_assembly",
    "MATCH_TOL",
]

# x1, x4, alpha1..3, beta, gamma exactly as published (5 decimals)
TABLE1 = {
    "x1": [1.00000, 0.00000, 0.00000],
    "x4": [0.54462, 0.80817, 0.22413],
    "alpha1": 0.40144,
    "alpha2": 0.82034,
    "alpha3": 0.92504,
    "beta": 0.23067,
    "gamma": 0.47437,
}

# theta, vx, vy, vz, ax, ay, az for theta_dot = 1, theta_ddot = 0
TABLE2 = np.array(
    [
        [0.00000, -0.14255, -0.06884, 0.59467, -0.42870, -0.25131, 0.02053],
        [0.62832, -0.28008, -0.18548, 0.35545, 0.03897, -0.15048, -0.56498],
        [1.25664, -0.17827, -0.23972, 0.05446, 0.22578, -0.00787, -0.37389],
        [1.88496, -0.02698, -0.20190, -0.13155, 0.24421, 0.11368, -0.23910],
        [2.51327, 0.10680, -0.11271, -0.26666, 0.15791, 0.16247, -0.19681],
        [3.14159, 0.15218, -0.00109, -0.36590, -0.00803, 0.19437, -0.09747],
        [3.76991, 0.12511, 0.13203, -0.36657, -0.05418, 0.22196, 0.10407],
        [4.39823, 0.09935, 0.25462, -0.23446, -0.02558, 0.14294, 0.31101],
        [5.02655, 0.08944, 0.28061, 0.01394, -0.01379, -0.08080, 0.47129],
        [5.65487, 0.05510, 0.14226, 0.34717, -0.14138, -0.34298, 0.56752],
    ]
)
TABLE2_THETA = TABLE2[:, 0]

MATCH_TOL = 1e-3


def _unit(v):
    a = np.asarray(v, dtype=float)
    return tuple(a / np.linalg.norm(a))


def table1_params(theta0=0.0, branch_sign=1):
    """Reference mechanism; the rounded axes are renormalised to unit length."""
    t = TABLE1
    return FourBarParams(
        x1=_unit(t["x1"]),
        x4=_unit(t["x4"]),
        alpha1=t["alpha1"],
        alpha2=t["alpha2"],
        alpha3=t["alpha3"],
        beta=t["beta"],
        gamma=t["gamma"],
        theta0=theta0,
        branch_sign=branch_sign,
    )


def table1_path():
    """Path of the bundled JSON parameter file for the reference mechanism."""
    return resources.files("dualkin") / "data" / "table1.json"


def table1_json():
    return json.loads(table1_path().read_text(encoding="utf-8"))


@dataclass(frozen=True)
class AssemblyMatch:
    theta0: float
    branch_sign: int
    first_row_error: float
    max_error: float  # over all rows; inf if some row is not assemblable

    @property
    def recovered(self):
        return self.max_error <= MATCH_TOL


def _row_error(params, frame, row):
    k = kinematics(row[0], 1.0, 0.0, params, frame)
    return float(np.max(np.abs(np.r_[k.velocity, k.acceleration] - row[1:])))


def search_assembly(params=None, table=TABLE2, theta0_grid=None, branches=(1, -1)):
    """Rank (theta0, branch) candidates by agreement with ``table``.

    ``first_row_error`` is the largest componentwise deviation on the first
    row; ``max_error`` the largest over every row.  Sorted best first.
    """
    params = params or table1_params()
    if theta0_grid is None:
        theta0_grid = np.linspace(0.0, 2.0 * math.pi, 72, endpoint=False)
    out = []
    for branch in branches:
        for t0 in theta0_grid:
            p = params.replace(theta0=float(t0), branch_sign=branch)
            try:
                frame = assemble(p)
                first = _row_error(p, frame, table[0])
            except MechanismError:
                continue
            worst = first
            for row in table[1:]:
                try:
                    worst = max(worst, _row_error(p, frame, row))
                except MechanismError:
                    worst = math.inf
                    break
            out.append(AssemblyMatch(float(t0), branch, first, worst))
    out.sort(key=lambda m: (m.first_row_error, m.max_error))
    return out
