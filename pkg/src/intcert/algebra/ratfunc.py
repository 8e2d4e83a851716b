"""Rational functions and partial-fraction decompositions."""

from __future__ import annotations

from fractions import Fraction

from ..errors import UnsupportedDenominator
from .poly import SparsePoly, exact_div, poly_gcd, poly_str
from .roots import gaussian_rational_roots
from .scalars import GaussianRational, ONE


class RationalFunction:
    """num/den with den != 0, reduced and denominator-monic (canonical)."""

    __slots__ = ("num", "den")

    def __init__(self, num: SparsePoly, den: SparsePoly | None = None, reduce: bool = True):
        if den is None:
            den = SparsePoly.constant(1, num.variables)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        num, den = num._align(den)
        if reduce and not num.is_zero:
            g = poly_gcd(num, den)
            if not g.is_constant:
                num = exact_div(num, g)
                den = exact_div(den, g)
                num, den = num._align(den)
        lc = den.leading_coefficient()
        if lc != ONE:
            inv = ONE / lc
            num = num * inv
            den = den * inv
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------------

    @staticmethod
    def of(value, variables=()) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, SparsePoly):
            return RationalFunction(value, reduce=False)
        return RationalFunction(
            SparsePoly.constant(GaussianRational.of(value), variables), reduce=False
        )

    # -- queries -------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den.is_constant

    def as_polynomial(self) -> SparsePoly:
        if not self.is_polynomial:
            raise ValueError(f"{self} is not a polynomial")
        return self.num * (ONE / self.den.constant_value())

    @property
    def is_constant(self) -> bool:
        return self.num.is_constant and self.den.is_constant

    def constant_value(self) -> GaussianRational:
        return self.num.constant_value() / self.den.constant_value()

    def used_variables(self) -> tuple:
        return tuple(sorted(set(self.num.used_variables()) | set(self.den.used_variables())))

    # -- arithmetic ------------------------------------------------------------

    def _promote(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, SparsePoly):
            return RationalFunction(other, reduce=False)
        if isinstance(other, (int, Fraction, GaussianRational)):
            return RationalFunction.of(other, self.num.variables)
        return NotImplemented

    def __add__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __mul__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, exponent: int):
        if exponent < 0:
            return (RationalFunction(self.den, self.num)) ** (-exponent)
        return RationalFunction(self.num ** exponent, self.den ** exponent, reduce=False)

    def __eq__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero

    def __hash__(self):
        return hash((self.num, self.den))

    # -- calculus ----------------------------------------------------------------

    def diff(self, var: str) -> "RationalFunction":
        return RationalFunction(
            self.num.diff(var) * self.den - self.num * self.den.diff(var),
            self.den * self.den,
        )

    def subs(self, assignment) -> "RationalFunction":
        """Substitute scalars, polynomials, or rational functions."""
        num = _poly_subs_rational(self.num, assignment)
        den = _poly_subs_rational(self.den, assignment)
        return num / den

    def eval_scalar(self, assignment) -> GaussianRational:
        den = self.den.eval_scalar(assignment)
        if not den:
            raise ZeroDivisionError(f"denominator of {self} vanishes at {assignment}")
        return self.num.eval_scalar(assignment) / den

    def __str__(self):
        if self.is_polynomial:
            return poly_str(self.as_polynomial())
        return f"({poly_str(self.num)})/({poly_str(self.den)})"

    __repr__ = __str__


def _poly_subs_rational(p: SparsePoly, assignment) -> RationalFunction:
    """Substitute into a polynomial where values may be rational functions."""
    plain = {}
    rational = {}
    for v, val in assignment.items():
        if isinstance(val, RationalFunction):
            if val.is_polynomial:
                plain[v] = val.as_polynomial()
            else:
                rational[v] = val
        else:
            plain[v] = val
    p = p.subs(plain) if plain else p
    if not rational:
        return RationalFunction(p, reduce=False)
    result = RationalFunction.of(0, ())
    powers = {v: {0: RationalFunction.of(1, ())} for v in rational}
    for exps, c in p.terms.items():
        piece = RationalFunction.of(c, ())
        for v, e in zip(p.variables, exps):
            if not e:
                continue
            if v in rational:
                cache = powers[v]
                if e not in cache:
                    cache[e] = rational[v] ** e
                piece = piece * cache[e]
            else:
                piece = piece * SparsePoly.variable(v) ** e
        result = result + piece
    return result


class PartialFractionDecomposition:
    """polynomial part plus terms coefficient/(var - root)^multiplicity."""

    __slots__ = ("variable", "polynomial_part", "terms")

    def __init__(self, variable, polynomial_part, terms):
        self.variable = variable
        self.polynomial_part = polynomial_part
        self.terms = list(terms)  # (root, multiplicity, coefficient)

    def recombine(self) -> RationalFunction:
        x = SparsePoly.variable(self.variable)
        total = RationalFunction(self.polynomial_part)
        for root, mult, coeff in self.terms:
            den = (x - SparsePoly.constant(root, (self.variable,))) ** mult
            total = total + RationalFunction(SparsePoly.constant(coeff, (self.variable,)), den)
        return total

    def __str__(self):
        bits = []
        if not self.polynomial_part.is_zero:
            bits.append(poly_str(self.polynomial_part))
        for root, mult, coeff in self.terms:
            base = f"{self.variable}" if not root else f"({self.variable} - {root})"
            power = base if mult == 1 else f"{base}^{mult}"
            bits.append(f"({coeff})/{power}")
        return " + ".join(bits) if bits else "0"


def partial_fractions(r: RationalFunction, var: str | None = None) -> PartialFractionDecomposition:
    """Exact decomposition over Q(i); denominator must split into linear factors."""
    used = r.used_variables()
    if var is None:
        if len(used) > 1:
            raise ValueError(f"{r} is not univariate")
        var = used[0] if used else "x"
    elif any(v != var for v in used):
        raise ValueError(f"{r} involves variables other than {var}")

    from .poly import poly_divrem

    if r.den.degree_in(var) > 0:
        q, rem = poly_divrem(r.num, r.den, var)
    else:
        q = r.num * (ONE / r.den.constant_value())
        rem = SparsePoly.zero(r.num.variables)
    terms = []
    if r.den.degree_in(var) > 0:
        roots, fully = gaussian_rational_roots(r.den, var)
        if not fully:
            raise UnsupportedDenominator(
                f"denominator {r.den} has a factor with no Gaussian-rational root"
            )
        x = SparsePoly.variable(var)
        for root, mult in roots:
            # q_a = den / (x - a)^mult, expand rem/q_a as a Taylor series at a
            factor = (x - SparsePoly.constant(root, (var,))) ** mult
            q_a = exact_div(r.den, factor)
            series = _local_series(rem, q_a, root, mult, var)
            for j, s in enumerate(series):
                if s:
                    terms.append((root, mult - j, s))
    terms.sort(key=lambda t: (t[0].sort_key(), -t[1]))
    return PartialFractionDecomposition(var, q, terms)


def _shift_coeffs(p: SparsePoly, root, var: str, count: int) -> list:
    """First `count` Taylor coefficients of p at var = root."""
    out = []
    deriv = p
    fact = 1
    for k in range(count):
        out.append(deriv.eval_scalar({var: root}) / fact)
        deriv = deriv.diff(var)
        fact *= k + 1
    return out


def _local_series(num: SparsePoly, den: SparsePoly, root, mult: int, var: str) -> list:
    """Taylor coefficients s_0..s_{mult-1} of num/den at var = root (den(root) != 0)."""
    a = _shift_coeffs(num, root, var, mult)
    b = _shift_coeffs(den, root, var, mult)
    if not b[0]:
        raise ArithmeticError("den vanishes at the expansion point")
    inv0 = ONE / b[0]
    s = []
    for k in range(mult):
        acc = a[k]
        for j in range(1, k + 1):
            acc = acc - b[j] * s[k - j]
        s.append(acc * inv0)
    return s
