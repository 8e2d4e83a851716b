"""Planar polynomial vector fields and elementary first-integral machinery."""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    RationalFunction,
    SparsePoly,
    SymbolicExpIntegral,
    log_quadrature,
    poly_gcd,
    exact_div,
    ONE,
)
from .errors import DegenerateMap, DependsOnY, NotExact

VARS = ("x", "y")


class VectorField:
    """The pair (P, Q) defining x' = P(x,y), y' = Q(x,y)."""

    __slots__ = ("P", "Q")

    def __init__(self, P: SparsePoly, Q: SparsePoly):
        P = P.with_variables(sorted(set(P.variables) | set(VARS)))
        Q = Q.with_variables(sorted(set(Q.variables) | set(VARS)))
        if set(P.used_variables()) - set(VARS) or set(Q.used_variables()) - set(VARS):
            raise ValueError("vector field components must live in (x, y)")
        if P.is_zero and Q.is_zero:
            raise ValueError("(P, Q) must not both vanish")
        self.P = P
        self.Q = Q

    @property
    def degree(self) -> int:
        """max(deg P, deg Q), recomputed on demand."""
        return max(self.P.total_degree(), self.Q.total_degree())

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.P == other.P and self.Q == other.Q

    def __str__(self):
        return f"x' = {self.P}, y' = {self.Q}"

    __repr__ = __str__


def lie_derivative(field: VectorField, f: SparsePoly) -> SparsePoly:
    """P f_x + Q f_y, the derivative of f along the flow."""
    return field.P * f.diff("x") + field.Q * f.diff("y")


def lie_derivative_rational(field: VectorField, f: RationalFunction) -> RationalFunction:
    num = lie_derivative(field, f.num) * f.den - f.num * lie_derivative(field, f.den)
    return RationalFunction(num, f.den * f.den)


def divergence(field: VectorField) -> SparsePoly:
    return field.P.diff("x") + field.Q.diff("y")


def polynomial_potential(field: VectorField) -> SparsePoly:
    """H with H_x = Q and H_y = -P, normalized so H(0,0) = 0.

    Exists exactly when the 1-form Q dx - P dy is closed, i.e. the
    divergence vanishes.
    """
    if not divergence(field).is_zero:
        raise NotExact(f"P_x + Q_y = {divergence(field)} != 0")
    h = field.Q.integrate("x")
    # correction in y so that H_y = -P everywhere
    p0 = field.P.subs({"x": 0})
    h = h - p0.integrate("y")
    assert h.diff("x") == field.Q and h.diff("y") == -field.P
    return h


@dataclass(frozen=True)
class XOnlyIntegratingFactor:
    """R(x) = exp(int r dx) making R*(Q dx - P dy) closed."""

    r: RationalFunction
    R: SymbolicExpIntegral


def x_only_integrating_factor(field: VectorField) -> XOnlyIntegratingFactor:
    """Integrating factor depending on x alone, when -(P_x + Q_y)/P allows it.

    The closedness convention d(RP)/dx = -d(RQ)/dy forces
    R'/R = -(P_x + Q_y)/P, which must be independent of y.
    """
    ratio = RationalFunction(-divergence(field), field.P)
    if "y" in ratio.used_variables():
        raise DependsOnY(f"(P_x + Q_y)/P = {-ratio} depends on y")
    r = _restrict_to_x(ratio)
    R = log_quadrature(r, "x")
    assert R.log_derivative() == r
    # closedness: r*P + P_x + Q_y = 0 identically
    residual = r * RationalFunction(field.P) + RationalFunction(divergence(field))
    assert residual.is_zero
    return XOnlyIntegratingFactor(r, R)


def _restrict_to_x(f: RationalFunction) -> RationalFunction:
    num = _drop_unused(f.num)
    den = _drop_unused(f.den)
    return RationalFunction(num, den, reduce=False)


def _drop_unused(p: SparsePoly) -> SparsePoly:
    used = p.used_variables()
    keep = used if used else ("x",)
    return p.with_variables(keep)


class RationalMap:
    """Birational change of variables (x,y) -> (X,Y) with an explicit inverse.

    The inverse is user-supplied; both compositions are verified to be the
    identity as exact rational-function identities at construction.
    """

    __slots__ = ("forward_X", "forward_Y", "inverse_x", "inverse_y")

    def __init__(self, forward_X, forward_Y, inverse_x, inverse_y):
        self.forward_X = RationalFunction.of(forward_X, VARS)
        self.forward_Y = RationalFunction.of(forward_Y, VARS)
        self.inverse_x = RationalFunction.of(inverse_x, ("X", "Y"))
        self.inverse_y = RationalFunction.of(inverse_y, ("X", "Y"))
        inv = {"X": self.forward_X, "Y": self.forward_Y}
        fwd = {"x": self.inverse_x, "y": self.inverse_y}
        checks = (
            (self.forward_X.subs(fwd), SparsePoly.variable("X", ("X", "Y"))),
            (self.forward_Y.subs(fwd), SparsePoly.variable("Y", ("X", "Y"))),
            (self.inverse_x.subs(inv), SparsePoly.variable("x", VARS)),
            (self.inverse_y.subs(inv), SparsePoly.variable("y", VARS)),
        )
        for got, expected in checks:
            if got != RationalFunction(expected, reduce=False):
                raise ValueError(f"map inverse fails: got {got}, expected {expected}")


@dataclass(frozen=True)
class TransformedODE:
    """dY/dX = Q_new / P_new as a coprime pair with monic P_new."""

    P: SparsePoly
    Q: SparsePoly


def change_variables(field: VectorField, chart: RationalMap) -> TransformedODE:
    """Push dy/dx = Q/P through the chart, returning dY/dX as a reduced pair."""
    dX = lie_derivative_rational(field, chart.forward_X)
    dY = lie_derivative_rational(field, chart.forward_Y)
    if dX.is_zero:
        raise DegenerateMap("the flow annihilates the new independent variable")
    ratio = dY / dX
    pushed = ratio.subs({"x": chart.inverse_x, "y": chart.inverse_y})
    num, den = pushed.num, pushed.den
    g = poly_gcd(num, den)
    if not g.is_constant:
        num = exact_div(num, g)
        den = exact_div(den, g)
    lc = den.leading_coefficient()
    if lc != ONE:
        inv = ONE / lc
        num, den = num * inv, den * inv
    return TransformedODE(den.with_variables(("X", "Y")), num.with_variables(("X", "Y")))
