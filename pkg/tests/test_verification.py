import math

import numpy as np
import pytest

from dualkin.dual2 import Dual2, seed_constant, sin
from dualkin.errors import EvaluationFailed, NoAssembly
from dualkin.fourbar import coupler_curve_dual
from dualkin.verification import ComparisonReport, FDConfig, compare_dual, fd_first, fd_second

CFG = FDConfig()


@pytest.mark.parametrize("kwargs", [{"h1": 0.0}, {"rtol2": -1.0}, {"atol": 0.0}, {"h1": 1e-3, "h2": 1e-4}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        FDConfig(**kwargs)


def test_fd_square():
    # central differences are exact on quadratics up to rounding
    assert fd_first(lambda x: x * x, 3.0)[0] == pytest.approx(6.0, rel=1e-9)
    assert fd_second(lambda x: x * x, 3.0)[0] == pytest.approx(2.0, rel=1e-6)


def test_fd_sin():
    assert fd_first(math.sin, 1.1)[0] == pytest.approx(math.cos(1.1), rel=1e-9)
    assert fd_second(math.sin, 1.1)[0] == pytest.approx(-math.sin(1.1), rel=1e-6)


def test_fd_constant():
    assert fd_first(lambda x: 4.2, 0.3)[0] == 0.0
    assert fd_second(lambda x: 4.2, 0.3)[0] == 0.0


def test_fd_vector_valued():
    g = fd_first(lambda x: [x, x**2, math.exp(x)], 0.5)
    np.testing.assert_allclose(g, [1.0, 1.0, math.exp(0.5)], rtol=1e-8)


def test_fd_evaluation_failure():
    with pytest.raises(EvaluationFailed) as info:
        fd_first(math.sqrt, 0.0)
    assert isinstance(info.value.__cause__, ValueError)


def test_compare_sin_passes():
    rep = compare_dual(sin, 1.1, CFG, labels=["s"])
    assert rep.passed
    assert [r.label for r in rep.rows] == ["s'", "s''"]
    assert rep.rows[0].ad_value == pytest.approx(math.cos(1.1), rel=1e-15)


def test_compare_coupler_curve(table1):
    p, f = table1
    rep = compare_dual(lambda t: coupler_curve_dual(t, p, f), 0.5, CFG, labels=["x", "y", "z"])
    assert len(rep.rows) == 6
    assert rep.passed
    assert {r.label for r in rep.rows} == {"x'", "x''", "y'", "y''", "z'", "z''"}


def test_compare_catches_wrong_second_derivative():
    def bad(x):
        s = sin(x)
        return Dual2(s.val, s.d1, s.d2 * 1.01)

    rep = compare_dual(bad, 1.1, CFG, f_value=math.sin)
    assert [r.label for r in rep.failures] == ["f0''"]
    assert not rep.passed


def test_compare_catches_wrong_first_derivative():
    def bad(x):
        s = sin(x)
        return Dual2(s.val, s.d1 + 1e-4, s.d2)

    rep = compare_dual(bad, 1.1, CFG, f_value=math.sin)
    assert [r.label for r in rep.failures] == ["f0'"]


def test_compare_skips_when_ad_fails():
    def boom(x):
        raise NoAssembly(x.val, -0.1)

    rep = compare_dual(boom, 0.2, CFG, labels=["x", "y"])
    assert len(rep.skipped) == 4 and not rep.tested
    assert not rep.passed


def test_compare_skips_when_stencil_fails():
    # sqrt is fine at the centre but the stencil steps below zero
    rep = compare_dual(lambda x: x, 0.0, CFG, f_value=lambda t: math.sqrt(t + 5e-7))
    assert len(rep.skipped) == 2


def test_mixed_report_passes_on_tested_rows(table1):
    p, f = table1
    rep = compare_dual(lambda t: coupler_curve_dual(t, p, f), 0.5, CFG)
    rep.extend(compare_dual(lambda x: (_ for _ in ()).throw(NoAssembly(0.0, -1.0)), 0.0, CFG))
    assert rep.skipped and rep.passed


def test_tightening_tolerance_never_adds_passes(table1):
    p, f = table1

    def g(t):
        return coupler_curve_dual(t, p, f)

    prev = None
    for rtol in (1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12):
        cfg = FDConfig(rtol1=rtol, rtol2=rtol, atol=1e-15)
        passed = {r.label for r in compare_dual(g, 2.0, cfg).rows if r.passed}
        if prev is not None:
            assert passed <= prev
        prev = passed
    assert not prev


def test_pass_rule_is_mixed_tolerance():
    cfg = FDConfig(rtol1=1e-6, atol=1e-9)
    # both derivatives essentially zero: the absolute floor decides
    rep = compare_dual(lambda x: seed_constant(2.0) + x * 1e-12, 0.0, cfg, f_value=lambda t: 2.0)
    assert rep.rows[0].passed


def test_report_formats(table1):
    p, f = table1
    rep = compare_dual(lambda t: coupler_curve_dual(t, p, f), 0.5, CFG, labels=["x", "y", "z"])
    csv = rep.to_csv()
    assert csv.splitlines()[0] == "x,label,ad,fd,abs_err,rel_err,status"
    assert len(csv.splitlines()) == 7
    assert rep.to_table().rstrip().endswith("PASS")
    assert not ComparisonReport().passed
