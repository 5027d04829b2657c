"""Command-line front end: input-angle sweeps and derivative verification.

    dualkin sweep  --params mech.json [--steps 10] [--format table|csv]
    dualkin verify --params mech.json [--rtol1 1e-6] [--rtol2 1e-4]

Exit status: 0 success, 1 verification failure, 2 configuration or
assembly error, 3 nothing could be verified (no feasible grid point).
"""

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import AssemblyImpossible, ConfigError, MechanismError
from .fourbar import FourBarParams, assemble, coupler_curve_dual, kinematics
from .verification import ComparisonReport, FDConfig, compare_dual

__all__ = [
    "RunConfig",
    "SweepResult",
    "load_params",
    "sweep",
    "verify",
    "format_table",
    "format_csv",
    "main",
    "EXIT_OK",
    "EXIT_VERIFY_FAILED",
    "EXIT_CONFIG",
    "EXIT_NOTHING_VERIFIED",
]

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NOTHING_VERIFIED = 3

# rounded published axes are off unit length by ~1e-5
AXIS_RENORM_TOL = 1e-3

_PARAM_KEYS = ("x1", "x4", "alpha1", "alpha2", "alpha3", "beta", "gamma", "theta0", "branch_sign")
_REQUIRED = ("x1", "x4", "alpha1", "alpha2", "alpha3", "beta", "gamma")


def _axis(raw, name):
    try:
        v = np.array([float(c) for c in raw])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name}: expected three numbers") from exc
    if v.shape != (3,):
        raise ConfigError(f"{name}: expected three numbers, got {len(v)}")
    n = np.linalg.norm(v)
    if abs(n - 1.0) > AXIS_RENORM_TOL:
        raise ConfigError(f"{name}: norm {n:.6g} is not close to 1")
    return tuple(v / n)


def params_from_dict(doc):
    if not isinstance(doc, dict):
        raise ConfigError("parameter file must hold a JSON object")
    missing = [k for k in _REQUIRED if k not in doc]
    if missing:
        raise ConfigError(f"missing fields: {', '.join(missing)}")
    unknown = sorted(set(doc) - set(_PARAM_KEYS))
    if unknown:
        raise ConfigError(f"unknown fields: {', '.join(unknown)}")
    try:
        return FourBarParams(
            x1=_axis(doc["x1"], "x1"),
            x4=_axis(doc["x4"], "x4"),
            alpha1=float(doc["alpha1"]),
            alpha2=float(doc["alpha2"]),
            alpha3=float(doc["alpha3"]),
            beta=float(doc["beta"]),
            gamma=float(doc["gamma"]),
            theta0=float(doc.get("theta0", 0.0)),
            branch_sign=int(doc.get("branch_sign", 1)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_params(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return params_from_dict(doc)


@dataclass(frozen=True)
class RunConfig:
    params: FourBarParams
    theta_start: float = 0.0
    theta_end: float = 2.0 * math.pi
    steps: int = 10
    theta_dot: float = 1.0
    theta_ddot: float = 0.0
    output_format: str = "table"
    precision: int = 5

    def __post_init__(self):
        if self.steps < 1:
            raise ConfigError(f"steps must be >= 1, got {self.steps}")
        if self.theta_end < self.theta_start:
            raise ConfigError("theta_end must be >= theta_start")
        if self.output_format not in ("table", "csv"):
            raise ConfigError(f"unknown output format {self.output_format!r}")
        if self.precision < 0:
            raise ConfigError("precision must be non-negative")

    def grid(self):
        """Half-open grid ``start + i (end - start) / steps``, i < steps."""
        span = self.theta_end - self.theta_start
        return [self.theta_start + i * span / self.steps for i in range(self.steps)]


@dataclass
class SweepResult:
    samples: list = field(default_factory=list)
    skipped: list = field(default_factory=list)  # (theta, reason)


def sweep(config):
    frame = assemble(config.params)
    result = SweepResult()
    for theta in config.grid():
        try:
            result.samples.append(
                kinematics(theta, config.theta_dot, config.theta_ddot, config.params, frame)
            )
        except MechanismError as exc:
            result.skipped.append((theta, str(exc)))
    return result


def verify(config, fd_cfg=FDConfig()):
    frame = assemble(config.params)
    report = ComparisonReport()
    for theta in config.grid():
        report.extend(
            compare_dual(
                lambda t: coupler_curve_dual(t, config.params, frame),
                theta,
                fd_cfg,
                labels=["x", "y", "z"],
            )
        )
    return report


def _fmt(x, precision):
    s = f"{x:.{precision}f}"
    # avoid "-0.00000" for values that round to zero
    if s.startswith("-") and not s.strip("-0."):
        s = s[1:]
    return s


CSV_HEADER = ("theta", "x", "y", "z", "vx", "vy", "vz", "ax", "ay", "az")


def format_csv(samples, precision=5):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for s in samples:
        vals = [s.theta, *s.r_gen, *s.velocity, *s.acceleration]
        w.writerow([_fmt(v, precision) for v in vals])
    return buf.getvalue()


def format_table(samples, precision=5):
    width = precision + 5
    names = ("theta", "vx", "vy", "vz", "ax", "ay", "az")
    lines = ["  ".join(f"{n:>{width}}" for n in names)]
    for s in samples:
        vals = [s.theta, *s.velocity, *s.acceleration]
        lines.append("  ".join(f"{_fmt(v, precision):>{width}}" for v in vals))
    return "\n".join(lines) + "\n"


def _build_parser():
    p = argparse.ArgumentParser(
        prog="dualkin",
        description="Coupler-point velocity and acceleration of a spherical four-bar.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--params", required=True, help="JSON mechanism parameter file")
        sp.add_argument("--theta-start", type=float, default=0.0)
        sp.add_argument("--theta-end", type=float, default=2.0 * math.pi)
        sp.add_argument("--steps", type=int, default=10)
        sp.add_argument("--theta-dot", type=float, default=1.0)
        sp.add_argument("--theta-ddot", type=float, default=0.0)
        sp.add_argument("--format", choices=("table", "csv"), default="table")
        sp.add_argument("--precision", type=int, default=5)

    common(sub.add_parser("sweep", help="tabulate velocity and acceleration over an input-angle grid"))
    v = sub.add_parser("verify", help="check AD derivatives against central finite differences")
    common(v)
    d = FDConfig()
    v.add_argument("--h1", type=float, default=d.h1)
    v.add_argument("--h2", type=float, default=d.h2)
    v.add_argument("--rtol1", type=float, default=d.rtol1)
    v.add_argument("--rtol2", type=float, default=d.rtol2)
    v.add_argument("--atol", type=float, default=d.atol)
    return p


def main(argv=None):
    args = _build_parser().parse_args(argv)
    out, err = sys.stdout, sys.stderr
    try:
        config = RunConfig(
            params=load_params(args.params),
            theta_start=args.theta_start,
            theta_end=args.theta_end,
            steps=args.steps,
            theta_dot=args.theta_dot,
            theta_ddot=args.theta_ddot,
            output_format=args.format,
            precision=args.precision,
        )
        if args.command == "sweep":
            result = sweep(config)
        else:
            try:
                fd_cfg = FDConfig(args.h1, args.h2, args.rtol1, args.rtol2, args.atol)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
            report = verify(config, fd_cfg)
    except (ConfigError, AssemblyImpossible) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_CONFIG

    if args.command == "sweep":
        fmt = format_csv if config.output_format == "csv" else format_table
        out.write(fmt(result.samples, config.precision))
        for theta, reason in result.skipped:
            print(f"skipped theta={theta:.{config.precision}f}: {reason}", file=err)
        if result.skipped:
            print(f"{len(result.skipped)} of {config.steps} grid points skipped", file=err)
        return EXIT_OK

    if config.output_format == "csv":
        out.write(report.to_csv(config.precision))
    else:
        out.write(report.to_table(config.precision))
    if not report.tested:
        print("no feasible grid point: nothing was verified", file=err)
        return EXIT_NOTHING_VERIFIED
    if report.skipped:
        print(f"{len(report.skipped)} rows skipped (infeasible input angles)", file=err)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


if __name__ == "__main__":
    sys.exit(main())
