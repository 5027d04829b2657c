"""Finite-difference oracles for checking dual derivatives.

The stencils only ever see plain ``float -> array`` callables, so they
stay independent of the dual arithmetic they are used to check.
"""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .dual2 import seed_constant, seed_variable
from .errors import DualError, EvaluationFailed, MechanismError

__all__ = ["FDConfig", "ComparisonRow", "ComparisonReport", "fd_first", "fd_second", "compare_dual"]


@dataclass(frozen=True)
class FDConfig:
    h1: float = 1e-6
    h2: float = 1e-4
    rtol1: float = 1e-6
    rtol2: float = 1e-4
    atol: float = 1e-9

    def __post_init__(self):
        for name in ("h1", "h2", "rtol1", "rtol2", "atol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.h2 < self.h1:
            raise ValueError("h2 must be >= h1")


def _eval(f, x):
    try:
        return np.atleast_1d(np.asarray(f(x), dtype=float))
    except Exception as exc:
        raise EvaluationFailed(x, exc) from exc


def fd_first(f, x, cfg=FDConfig()):
    """Central difference ``(f(x+h) - f(x-h)) / 2h``."""
    h = cfg.h1
    return (_eval(f, x + h) - _eval(f, x - h)) / (2.0 * h)


def fd_second(f, x, cfg=FDConfig()):
    """Central second difference ``(f(x+h) - 2 f(x) + f(x-h)) / h^2``."""
    h = cfg.h2
    return (_eval(f, x + h) - 2.0 * _eval(f, x) + _eval(f, x - h)) / (h * h)


@dataclass(frozen=True)
class ComparisonRow:
    label: str
    ad_value: float
    fd_value: float
    abs_err: float
    rel_err: float
    rtol: float
    passed: bool
    skipped: bool = False
    x: float = math.nan


def _row(label, ad, fd, rtol, atol, x):
    err = abs(ad - fd)
    scale = max(abs(ad), abs(fd))
    rel = err / scale if scale > 0 else 0.0
    return ComparisonRow(label, ad, fd, err, rel, rtol, err <= atol + rtol * scale, False, x)


@dataclass
class ComparisonReport:
    rows: list = field(default_factory=list)

    @property
    def tested(self):
        return [r for r in self.rows if not r.skipped]

    @property
    def skipped(self):
        return [r for r in self.rows if r.skipped]

    @property
    def failures(self):
        return [r for r in self.tested if not r.passed]

    @property
    def passed(self):
        # skipped rows neither pass nor fail; an empty report is not a pass
        return bool(self.tested) and not self.failures

    def extend(self, other):
        self.rows.extend(other.rows)
        return self

    def to_csv(self, precision=5):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "label", "ad", "fd", "abs_err", "rel_err", "status"])
        for r in self.rows:
            status = "skip" if r.skipped else ("pass" if r.passed else "FAIL")
            w.writerow(
                [
                    f"{r.x:.{precision}f}",
                    r.label,
                    f"{r.ad_value:.{precision + 5}e}",
                    f"{r.fd_value:.{precision + 5}e}",
                    f"{r.abs_err:.3e}",
                    f"{r.rel_err:.3e}",
                    status,
                ]
            )
        return buf.getvalue()

    def to_table(self, precision=5):
        head = f"{'x':>10}  {'quantity':<10} {'AD':>16} {'FD':>16} {'abs err':>10} {'rel err':>10}  status"
        lines = [head, "-" * len(head)]
        for r in self.rows:
            if r.skipped:
                lines.append(f"{r.x:>10.{precision}f}  {r.label:<10} {'':>16} {'':>16} {'':>10} {'':>10}  skip")
                continue
            lines.append(
                f"{r.x:>10.{precision}f}  {r.label:<10} {r.ad_value:>16.9e} {r.fd_value:>16.9e} "
                f"{r.abs_err:>10.3e} {r.rel_err:>10.3e}  {'pass' if r.passed else 'FAIL'}"
            )
        n_ok = sum(r.passed for r in self.tested)
        lines.append(
            f"{n_ok}/{len(self.tested)} rows passed, {len(self.skipped)} skipped: "
            + ("PASS" if self.passed else "FAIL")
        )
        return "\n".join(lines) + "\n"


def _components(y):
    # a Dual2 is itself a 3-tuple; a DVec3 is a 3-tuple of them
    if len(y) and isinstance(y[0], tuple):
        return list(y)
    return [y]


def _skipped(labels, x):
    return ComparisonReport(
        [
            ComparisonRow(f"{lab}{p}", math.nan, math.nan, math.nan, math.nan, math.nan, False, True, x)
            for lab in labels
            for p in ("'", "''")
        ]
    )


def compare_dual(f_dual, x, cfg=FDConfig(), labels=None, f_value=None):
    """Compare derivative slots of ``f_dual`` at ``{x, 1, 0}`` with central differences.

    ``f_dual`` maps a :class:`~dualkin.dual2.Dual2` to a ``Dual2`` or a
    sequence of them. The stencil evaluates ``f_value`` (a plain real
    function) when given, otherwise the value part of ``f_dual`` at
    constant seeds. Produces one row per component and derivative order;
    if ``x`` or any stencil point cannot be evaluated, those rows are
    marked skipped.
    """
    if f_value is None:

        def f_value(t):
            return [c[0] for c in _components(f_dual(seed_constant(t)))]

    try:
        comps = _components(f_dual(seed_variable(x)))
    except (MechanismError, DualError):
        return _skipped(labels or ["f0"], x)
    labels = labels or [f"f{i}" for i in range(len(comps))]
    try:
        g1 = fd_first(f_value, x, cfg)
        g2 = fd_second(f_value, x, cfg)
    except EvaluationFailed:
        return _skipped(labels, x)

    rows = []
    for i, (c, lab) in enumerate(zip(comps, labels)):
        rows.append(_row(f"{lab}'", c[1], g1[i], cfg.rtol1, cfg.atol, x))
        rows.append(_row(f"{lab}''", c[2], g2[i], cfg.rtol2, cfg.atol, x))
    return ComparisonReport(rows)
