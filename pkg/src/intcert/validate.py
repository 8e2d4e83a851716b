"""Cross-cutting verification: closedness of rational 1-forms and numeric
conservation checks of candidate first integrals along trajectories.

Everything here except numeric_drift stays exact.  The numeric check
projects Gaussian-rational data to floats and refuses anything with a
nonzero imaginary part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import _numkernels
from .algebra import (
    GaussianRational,
    RationalFunction,
    SparsePoly,
    SymbolicExpIntegral,
)
from .darboux import DarbouxCertificate
from .errors import DomainCrossing, StepFailure
from .vectorfield import VectorField

VARS = ("x", "y")


@dataclass(frozen=True)
class RationalOneForm:
    """a dx + b dy with rational-function coefficients."""

    a: RationalFunction
    b: RationalFunction


def closedness_check(form: RationalOneForm):
    """(ok, residual) for d(a dx + b dy) = 0, i.e. b_x - a_y = 0 exactly."""
    residual = form.b.diff("x") - form.a.diff("y")
    return residual.is_zero, residual


def iif_to_one_form(field: VectorField, V: RationalFunction) -> RationalOneForm:
    """(Q dx - P dy)/V; closed exactly when V is an inverse integrating factor."""
    if V.is_zero:
        raise ValueError("V must be nonzero")
    return RationalOneForm(
        RationalFunction(field.Q) / V, -(RationalFunction(field.P) / V)
    )


# -- real expression trees -------------------------------------------------------


class RealExpr:
    """Evaluable expression atoms for numeric conservation checks."""

    def eval(self, x: float, y: float) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class PolyAtom(RealExpr):
    poly: SparsePoly

    def eval(self, x, y):
        return _eval_poly(self.poly, x, y)


@dataclass(frozen=True)
class RatAtom(RealExpr):
    fn: RationalFunction

    def eval(self, x, y):
        den = _eval_poly(self.fn.den, x, y)
        if den == 0.0:
            raise DomainCrossing("rational atom hit a pole")
        return _eval_poly(self.fn.num, x, y) / den


@dataclass(frozen=True)
class PowNode(RealExpr):
    base: RealExpr
    exponent: Fraction

    def eval(self, x, y):
        b = self.base.eval(x, y)
        if self.exponent.denominator == 1:
            k = int(self.exponent)
            if b == 0.0 and k < 0:
                raise DomainCrossing("negative power of zero")
            return b ** k
        if b <= 0.0:
            raise DomainCrossing("non-integer power of a nonpositive value")
        return b ** float(self.exponent)


@dataclass(frozen=True)
class ExpNode(RealExpr):
    arg: RealExpr

    def eval(self, x, y):
        return math.exp(self.arg.eval(x, y))


@dataclass(frozen=True)
class ProdNode(RealExpr):
    factors: tuple

    def eval(self, x, y):
        total = 1.0
        for f in self.factors:
            total *= f.eval(x, y)
        return total


def _real_fraction(c: GaussianRational) -> Fraction:
    if c.im:
        raise ValueError(f"{c} has a nonzero imaginary part")
    return c.re


def _eval_poly(p: SparsePoly, x: float, y: float) -> float:
    total = 0.0
    ix = p.variables.index("x") if "x" in p.variables else None
    iy = p.variables.index("y") if "y" in p.variables else None
    for exps, c in p.terms.items():
        value = float(_real_fraction(c))
        if ix is not None and exps[ix]:
            value *= x ** exps[ix]
        if iy is not None and exps[iy]:
            value *= y ** exps[iy]
        for v, e in zip(p.variables, exps):
            if e and v not in VARS:
                raise ValueError(f"cannot evaluate {v!r} numerically")
        total += value
    return total


def expr_from_certificate(cert: DarbouxCertificate) -> RealExpr:
    """prod C_i^(l_i) * prod exp(h_j/g_j^n_j)^(mu_j) as an evaluable tree."""
    factors = []
    for curve, e in cert.curve_terms:
        factors.append(PowNode(PolyAtom(curve.C), _real_fraction(e)))
    for factor, e in cert.exp_terms:
        inner = RationalFunction(factor.h * _real_fraction(e), factor.g ** factor.n)
        factors.append(ExpNode(RatAtom(inner)))
    return ProdNode(tuple(factors))


def expr_from_expintegral(R: SymbolicExpIntegral, extra=None) -> RealExpr:
    """R(x) (optionally times a polynomial) as an evaluable tree."""
    x = SparsePoly.variable("x", VARS)
    factors = []
    for root, e in R.factors:
        lin = x - SparsePoly.constant(root, VARS)
        factors.append(PowNode(PolyAtom(lin), _real_fraction(e)))
    if not R.arg.is_zero:
        arg = RationalFunction(
            R.arg.num.with_variables(VARS), R.arg.den.with_variables(VARS)
        )
        factors.append(ExpNode(RatAtom(arg)))
    if extra is not None:
        factors.append(PolyAtom(extra))
    return ProdNode(tuple(factors))


# -- drift measurement ---------------------------------------------------------------


@dataclass(frozen=True)
class DriftReport:
    samples: int
    max_relative_drift: float
    trajectory_span: tuple
    step_min: float
    step_max: float
    backend: str

    def to_dict(self):
        return {
            "samples": self.samples,
            "max_relative_drift": self.max_relative_drift,
            "trajectory_span": list(self.trajectory_span),
            "step_min": self.step_min,
            "step_max": self.step_max,
            "backend": self.backend,
        }


_DRIFT_FLOOR = 1e-30


def _compile_poly(p: SparsePoly):
    import numpy as np

    exps = []
    coefs = []
    p = p.with_variables(sorted(set(p.variables) | set(VARS)))
    ix = p.variables.index("x")
    iy = p.variables.index("y")
    for e, c in p.sorted_terms():
        exps.append((e[ix], e[iy]))
        coefs.append(float(_real_fraction(c)))
    if not exps:
        exps.append((0, 0))
        coefs.append(0.0)
    return np.array(exps, dtype=np.int64), np.array(coefs, dtype=np.float64)


def numeric_drift(
    field: VectorField,
    H: RealExpr,
    start,
    t_span,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    max_steps: int = 2_000_000,
) -> DriftReport:
    """Integrate the field and measure |H(t) - H(0)| / max(|H(0)|, floor).

    The trajectory uses an embedded Fehlberg 4(5) pair with adaptive steps;
    H is evaluated at every accepted step.
    """
    exps_p, coefs_p = _compile_poly(field.P)
    exps_q, coefs_q = _compile_poly(field.Q)
    x0, y0 = float(start[0]), float(start[1])
    t0, t1 = float(t_span[0]), float(t_span[1])
    status, ts, xs, ys = _numkernels.rkf45_polyfield(
        exps_p, coefs_p, exps_q, coefs_q, x0, y0, t0, t1, rtol, atol, max_steps
    )
    if status == _numkernels.STATUS_STEP_UNDERFLOW:
        raise StepFailure(
            f"step size underflow at t = {ts[-1]:.6g} (singularity ahead?)"
        )
    if status == _numkernels.STATUS_MAX_STEPS:
        raise StepFailure(f"exceeded {max_steps} steps")
    h0 = H.eval(float(xs[0]), float(ys[0]))
    denom = max(abs(h0), _DRIFT_FLOOR)
    worst = 0.0
    for xv, yv in zip(xs, ys):
        value = H.eval(float(xv), float(yv))
        drift = abs(value - h0) / denom
        if drift > worst:
            worst = drift
    steps = [abs(b - a) for a, b in zip(ts[:-1], ts[1:])]
    return DriftReport(
        samples=len(ts),
        max_relative_drift=worst,
        trajectory_span=(t0, float(ts[-1])),
        step_min=min(steps) if steps else 0.0,
        step_max=max(steps) if steps else 0.0,
        backend=_numkernels.backend_name(),
    )
