"""Closed forms for exp of an integral of a univariate rational function.

The value exp(int r dx) is kept as exp(arg) * prod (x - a_j)^(e_j) with a
rational argument and Gaussian-rational exponents.  Differentiating the log
of this representation is exact, so every construction is verifiable.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import SparsePoly
from .ratfunc import RationalFunction, partial_fractions
from .scalars import GaussianRational, ONE


class SymbolicExpIntegral:
    """exp(arg(x)) * prod (x - root)^exponent, all data exact."""

    __slots__ = ("variable", "arg", "factors")

    def __init__(self, variable: str, arg: RationalFunction, factors):
        self.variable = variable
        self.arg = arg
        merged = {}
        for root, e in factors:
            e = GaussianRational.of(e)
            if root in merged:
                merged[root] = merged[root] + e
            else:
                merged[root] = e
        self.factors = tuple(
            (root, e) for root, e in sorted(merged.items(), key=lambda t: t[0].sort_key()) if e
        )

    # -- constructors ------------------------------------------------------

    @staticmethod
    def one(variable: str = "x") -> "SymbolicExpIntegral":
        return SymbolicExpIntegral(
            variable, RationalFunction.of(0, (variable,)), ()
        )

    # -- structure -----------------------------------------------------------

    @property
    def is_one(self) -> bool:
        return self.arg.is_zero and not self.factors

    def log_derivative(self) -> RationalFunction:
        """d/dx log(self), an exact rational function."""
        x = SparsePoly.variable(self.variable)
        total = self.arg.diff(self.variable)
        for root, e in self.factors:
            lin = x - SparsePoly.constant(root, (self.variable,))
            total = total + RationalFunction(SparsePoly.constant(e, (self.variable,)), lin)
        return total

    def as_rational(self) -> RationalFunction | None:
        """The same value as a rational function, when one exists."""
        if not self.arg.is_zero:
            return None
        num = SparsePoly.constant(1, (self.variable,))
        den = SparsePoly.constant(1, (self.variable,))
        x = SparsePoly.variable(self.variable)
        for root, e in self.factors:
            if not (e.is_rational and e.re.denominator == 1):
                return None
            k = int(e.re)
            lin = x - SparsePoly.constant(root, (self.variable,))
            if k >= 0:
                num = num * lin ** k
            else:
                den = den * lin ** (-k)
        return RationalFunction(num, den, reduce=False)

    def __mul__(self, other: "SymbolicExpIntegral") -> "SymbolicExpIntegral":
        if self.variable != other.variable:
            raise ValueError("mixed variables")
        return SymbolicExpIntegral(
            self.variable, self.arg + other.arg, self.factors + other.factors
        )

    def inverse(self) -> "SymbolicExpIntegral":
        return SymbolicExpIntegral(
            self.variable, -self.arg, tuple((r, -e) for r, e in self.factors)
        )

    def __pow__(self, c) -> "SymbolicExpIntegral":
        c = GaussianRational.of(c)
        return SymbolicExpIntegral(
            self.variable,
            self.arg * c,
            tuple((r, e * c) for r, e in self.factors),
        )

    def __eq__(self, other):
        if not isinstance(other, SymbolicExpIntegral):
            return NotImplemented
        return (
            self.variable == other.variable
            and self.arg == other.arg
            and self.factors == other.factors
        )

    def __str__(self):
        bits = []
        for root, e in self.factors:
            if root:
                base = f"({self.variable} - {root})" if not root.im and root.re > 0 else f"({self.variable} - ({root}))"
                if root.is_rational and root.re < 0:
                    base = f"({self.variable} + {-root.re})"
            else:
                base = self.variable
            if e == ONE:
                bits.append(base)
            else:
                bits.append(f"{base}^({e})")
        if not self.arg.is_zero:
            bits.append(f"exp({self.arg})")
        return "*".join(bits) if bits else "1"

    __repr__ = __str__

    def eval_real(self, x_value: float) -> float:
        """Float evaluation; raises ValueError outside the real domain."""
        total = 1.0
        for root, e in self.factors:
            if root.im or e.im:
                raise ValueError("nonreal data in numeric evaluation")
            base = x_value - float(root.re)
            exp = e.re
            if exp.denominator == 1:
                k = int(exp)
                if base == 0.0 and k < 0:
                    raise ZeroDivisionError("pole in numeric evaluation")
                total *= base ** k
            else:
                if base <= 0.0:
                    raise ValueError("non-integer power of a nonpositive base")
                total *= base ** float(exp)
        if not self.arg.is_zero:
            import math

            total *= math.exp(_eval_rational_float(self.arg, self.variable, x_value))
        return total


def _eval_rational_float(r: RationalFunction, var: str, x_value: float) -> float:
    num = _eval_poly_float(r.num, var, x_value)
    den = _eval_poly_float(r.den, var, x_value)
    if den == 0.0:
        raise ZeroDivisionError("pole in numeric evaluation")
    return num / den


def _eval_poly_float(p: SparsePoly, var: str, x_value: float) -> float:
    total = 0.0
    k = p.variables.index(var) if var in p.variables else None
    for exps, c in p.terms.items():
        if c.im:
            raise ValueError("nonreal coefficient in numeric evaluation")
        e = exps[k] if k is not None else 0
        total += float(c.re) * x_value ** e
    return total


def log_quadrature(r: RationalFunction, var: str | None = None) -> SymbolicExpIntegral:
    """exp(int r dx) for univariate rational r, via partial fractions.

    Simple poles become power factors; higher-order poles and the
    polynomial part integrate into the exp argument.
    """
    pf = partial_fractions(r, var)
    var = pf.variable
    arg = RationalFunction(pf.polynomial_part.integrate(var))
    factors = []
    x = SparsePoly.variable(var)
    for root, mult, coeff in pf.terms:
        if mult == 1:
            factors.append((root, coeff))
        else:
            # c/(x-a)^m integrates to -c/((m-1)(x-a)^(m-1))
            lin = (x - SparsePoly.constant(root, (var,))) ** (mult - 1)
            piece = RationalFunction(
                SparsePoly.constant(-coeff * Fraction(1, mult - 1), (var,)), lin
            )
            arg = arg + piece
    return SymbolicExpIntegral(var, arg, factors)
