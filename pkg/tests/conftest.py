import math

import numpy as np
import pytest

from dualkin.fourbar import FourBarParams, assemble
from dualkin.reference import table1_params

ATOL = 1e-12
RTOL = 1e-9


def assert_dual_close(got, want, atol=ATOL, rtol=RTOL):
    """Componentwise |a - b| <= atol + rtol |b| over (val, d1, d2)."""
    for slot, (a, b) in enumerate(zip(got, want)):
        assert abs(a - b) <= atol + rtol * abs(b), f"slot {slot}: {a!r} != {b!r} ({got!r} vs {want!r})"


def equal_right_angle_params(theta0=math.pi / 2, branch_sign=1):
    # x1 = e_z, x4 = e_x, all moving links pi/2
    h = math.pi / 2
    return FourBarParams((0, 0, 1), (1, 0, 0), h, h, h, beta=0.3, gamma=0.2, theta0=theta0, branch_sign=branch_sign)


@pytest.fixture(scope="session")
def table1():
    p = table1_params()
    return p, assemble(p)


@pytest.fixture(scope="session", params=[1, -1], ids=["branch+", "branch-"])
def table1_both(request):
    p = table1_params(branch_sign=request.param)
    return p, assemble(p)


@pytest.fixture(scope="session")
def right_angle():
    p = equal_right_angle_params()
    return p, assemble(p)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
