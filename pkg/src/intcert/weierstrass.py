"""Truncated formal power series in x, polynomials in y over them, and
verification of series-form inverse-integrating-factor certificates.

Truncation is tracked explicitly: order=None marks an exact polynomial
(all higher coefficients are genuinely zero), otherwise order N means the
coefficients of x^0..x^N are reliable.  Derivatives and divisions lower
the reliable order, so every verdict reports the order actually achieved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import GaussianRational, ONE, SparsePoly, ZERO
from .errors import MalformedCertificate, SingularAtOrigin
from .vectorfield import VectorField, divergence

VARS = ("x", "y")


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class TruncSeries:
    """Power series in one variable known modulo x^(order+1).

    coeffs may be shorter than order+1 (missing entries are zero); an
    exact polynomial uses order=None.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order):
        coeffs = [c if isinstance(c, GaussianRational) else GaussianRational(c) for c in coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        if order is not None:
            coeffs = coeffs[: order + 1]
            while coeffs and not coeffs[-1]:
                coeffs.pop()
        self.coeffs = coeffs
        self.order = order

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(order=None) -> "TruncSeries":
        return TruncSeries([], order)

    @staticmethod
    def constant(value, order=None) -> "TruncSeries":
        return TruncSeries([GaussianRational.of(value)], order)

    @staticmethod
    def x_power(k: int, order=None) -> "TruncSeries":
        return TruncSeries([ZERO] * k + [ONE], order)

    # -- queries --------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_exact(self) -> bool:
        return self.order is None

    def coefficient(self, k: int) -> GaussianRational:
        if k < len(self.coeffs):
            return self.coeffs[k]
        return ZERO

    def valuation(self):
        """Index of the first nonzero coefficient (None for zero series)."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def constant_term(self) -> GaussianRational:
        return self.coefficient(0)

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other):
        other = _as_series(other)
        order = _min_order(self.order, other.order)
        n = max(len(self.coeffs), len(other.coeffs))
        coeffs = [self.coefficient(k) + other.coefficient(k) for k in range(n)]
        return TruncSeries(coeffs, order)

    def __sub__(self, other):
        return self + (-_as_series(other))

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs], self.order)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            c = GaussianRational.of(other)
            return TruncSeries([a * c for a in self.coeffs], self.order)
        other = _as_series(other)
        if self.is_zero or other.is_zero:
            return TruncSeries.zero(_min_order(self.order, other.order))
        if self.order is None and other.order is None:
            order = None
            limit = len(self.coeffs) + len(other.coeffs) - 1
        else:
            va = self.valuation() or 0
            vb = other.valuation() or 0
            bound_a = None if self.order is None else self.order + vb
            bound_b = None if other.order is None else other.order + va
            order = _min_order(bound_a, bound_b)
            limit = order + 1
        coeffs = [ZERO] * limit
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= limit:
                    break
                if b:
                    coeffs[i + j] = coeffs[i + j] + a * b
        return TruncSeries(coeffs, order)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = TruncSeries.constant(1, self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def differentiate(self) -> "TruncSeries":
        coeffs = [self.coeffs[k] * k for k in range(1, len(self.coeffs))]
        order = None if self.order is None else max(self.order - 1, 0)
        return TruncSeries(coeffs, order)

    def integrate(self) -> "TruncSeries":
        coeffs = [ZERO] + [
            c * Fraction(1, k + 1) for k, c in enumerate(self.coeffs)
        ]
        order = None if self.order is None else self.order + 1
        return TruncSeries(coeffs, order)

    def invert(self) -> "TruncSeries":
        """1/self, requiring a nonzero constant term and finite order."""
        if not self.constant_term():
            raise ZeroDivisionError("series has zero constant term")
        if self.order is None:
            raise ValueError("inverting an exact polynomial needs a truncation order")
        n = self.order
        inv0 = ONE / self.coeffs[0]
        out = [inv0]
        for k in range(1, n + 1):
            acc = ZERO
            for j in range(1, k + 1):
                acc = acc + self.coefficient(j) * out[k - j]
            out.append(-acc * inv0)
        return TruncSeries(out, n)

    def truncate(self, order: int) -> "TruncSeries":
        return TruncSeries(self.coeffs[: order + 1], order)

    def __eq__(self, other):
        other = _as_series(other)
        return self.coeffs == other.coeffs and self.order == other.order

    def __str__(self):
        if not self.coeffs:
            body = "0"
        else:
            bits = []
            for k, c in enumerate(self.coeffs):
                if not c:
                    continue
                if k == 0:
                    bits.append(str(c))
                else:
                    mono = "x" if k == 1 else f"x^{k}"
                    bits.append(mono if c == ONE else f"({c})*{mono}")
            body = " + ".join(bits) if bits else "0"
        if self.order is None:
            return body
        return f"{body} + O(x^{self.order + 1})"

    __repr__ = __str__


def _as_series(value) -> TruncSeries:
    if isinstance(value, TruncSeries):
        return value
    if isinstance(value, (int, Fraction, GaussianRational)):
        return TruncSeries.constant(value)
    raise TypeError(f"cannot coerce {value!r} to a series")


class SeriesPolyY:
    """Polynomial in y whose coefficients are truncated series in x."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = [c if isinstance(c, TruncSeries) else _as_series(c) for c in coeffs]
        while coeffs and coeffs[-1].is_zero:
            coeffs.pop()
        self.coeffs = coeffs

    @staticmethod
    def zero() -> "SeriesPolyY":
        return SeriesPolyY([])

    @staticmethod
    def from_sparse(p: SparsePoly, order=None) -> "SeriesPolyY":
        """Embed an exact polynomial in (x, y); order=None keeps it exact."""
        by_y = {}
        p = p.with_variables(sorted(set(p.variables) | set(VARS)))
        ix = p.variables.index("x")
        iy = p.variables.index("y")
        for exps, c in p.terms.items():
            if any(e and v not in VARS for v, e in zip(p.variables, exps)):
                raise ValueError("series embedding needs a polynomial in (x, y)")
            bucket = by_y.setdefault(exps[iy], {})
            bucket[exps[ix]] = c
        ydeg = max(by_y) if by_y else 0
        coeffs = []
        for d in range(ydeg + 1):
            bucket = by_y.get(d, {})
            n = max(bucket) if bucket else 0
            coeffs.append(
                TruncSeries([bucket.get(k, ZERO) for k in range(n + 1)], order)
            )
        return SeriesPolyY(coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def ydeg(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, k: int) -> TruncSeries:
        if k < len(self.coeffs):
            return self.coeffs[k]
        return TruncSeries.zero()

    def order(self):
        """Smallest tracked order among coefficients (None if all exact)."""
        order = None
        for c in self.coeffs:
            order = _min_order(order, c.order)
        return order

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return SeriesPolyY(
            [self.coefficient(k) + other.coefficient(k) for k in range(n)]
        )

    def __sub__(self, other):
        return self + other.scale(GaussianRational(-1))

    def scale(self, c) -> "SeriesPolyY":
        return SeriesPolyY([a * c for a in self.coeffs])

    def scale_series(self, s: TruncSeries) -> "SeriesPolyY":
        return SeriesPolyY([a * s for a in self.coeffs])

    def __mul__(self, other):
        if self.is_zero or other.is_zero:
            return SeriesPolyY.zero()
        out = [TruncSeries.zero() for _ in range(self.ydeg + other.ydeg + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero:
                    out[i + j] = out[i + j] + a * b
        return SeriesPolyY(out)

    def diff_x(self) -> "SeriesPolyY":
        return SeriesPolyY([c.differentiate() for c in self.coeffs])

    def diff_y(self) -> "SeriesPolyY":
        return SeriesPolyY(
            [self.coeffs[k] * k for k in range(1, len(self.coeffs))]
        )

    def subs_y(self, g: TruncSeries) -> TruncSeries:
        """Evaluate at y = g(x) (Horner)."""
        acc = TruncSeries.zero()
        for c in reversed(self.coeffs):
            acc = acc * g + c
        return acc

    def zero_to_order(self):
        """(is_zero, achieved) where achieved is the verified order (None = exact)."""
        achieved = self.order()
        for c in self.coeffs:
            if not c.is_zero:
                first_bad = c.valuation()
                return False, first_bad
        return True, achieved

    def __str__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_zero:
                continue
            mono = "" if k == 0 else ("y" if k == 1 else f"y^{k}")
            bits.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(bits) if bits else "0"

    __repr__ = __str__


def lie_series(field: VectorField, C: SeriesPolyY) -> SeriesPolyY:
    """X(C) = P C_x + Q C_y in series-polynomial arithmetic."""
    P = SeriesPolyY.from_sparse(field.P)
    Q = SeriesPolyY.from_sparse(field.Q)
    return P * C.diff_x() + Q * C.diff_y()


def is_weierstrass_polynomial(p: SeriesPolyY) -> bool:
    """Monic in y with every lower coefficient vanishing at x = 0."""
    if p.is_zero:
        return False
    top = p.coeffs[-1]
    if not (top.constant_term() == ONE and all(not c for c in top.coeffs[1:])):
        return False
    return all(not c.constant_term() for c in p.coeffs[:-1])


def formal_solution(field: VectorField, order: int) -> TruncSeries:
    """The formal solution g with g(0) = 0 of P(x,g) g' = Q(x,g).

    Picard iteration in the x-adic metric: each pass fixes one more
    coefficient, so `order` passes suffice for coefficients up to x^order.
    Requires P(0,0) != 0.
    """
    if not field.P.eval_scalar({"x": 0, "y": 0}):
        raise SingularAtOrigin("P(0,0) = 0")
    P = SeriesPolyY.from_sparse(field.P)
    Q = SeriesPolyY.from_sparse(field.Q)
    g = TruncSeries.zero(order)
    for _ in range(order + 1):
        p_val = P.subs_y(g).truncate(order)
        q_val = Q.subs_y(g).truncate(order)
        slope = q_val * p_val.invert()
        g = slope.integrate().truncate(order)
    residual = P.subs_y(g) * g.differentiate() - Q.subs_y(g)
    bad = residual.valuation()
    if not residual.is_zero and bad is not None and bad < order:
        raise ArithmeticError("formal solution fails its defining equation")
    return g


def verify_formal_invariant(
    field: VectorField, C: SeriesPolyY, K: SeriesPolyY, order: int
):
    """(ok, achieved_order) for X(C) - K C = 0 mod x^(order+1)."""
    residual = lie_series(field, C) - K * C
    return _verdict(residual, order)


def _verdict(residual: SeriesPolyY, order: int):
    tracked = residual.order()
    achieved = order if tracked is None else min(order, tracked)
    for c in residual.coeffs:
        v = c.valuation()
        if v is not None and v <= achieved:
            return False, v
    return True, achieved


@dataclass(frozen=True)
class WeierstrassCertificate:
    """V = exp(D/E) prod C_i^(l_i) with Weierstrass-polynomial data mod x^N."""

    D: SeriesPolyY
    E: SeriesPolyY
    curve_terms: tuple  # ((SeriesPolyY, GaussianRational), ...)
    order: int


def check_weierstrass_certificate(field: VectorField, cert: WeierstrassCertificate):
    """(ok, achieved_order) for the cleared inverse-integrating-factor identity.

    E^2 prod C_i * [X(D/E) + sum l_i X(C_i)/C_i - div] = 0, expanded as a
    polynomial in y with series coefficients, verified mod x^(achieved+1).
    """
    if not is_weierstrass_polynomial(cert.E):
        raise MalformedCertificate(f"E = {cert.E} is not a Weierstrass polynomial")
    for C, _ in cert.curve_terms:
        if not is_weierstrass_polynomial(C):
            raise MalformedCertificate(f"C = {C} is not a Weierstrass polynomial")
    order = cert.order
    D, E = cert.D, cert.E
    prod_all = SeriesPolyY.from_sparse(SparsePoly.constant(1, VARS))
    for C, _ in cert.curve_terms:
        prod_all = prod_all * C
    XD = lie_series(field, D)
    XE = lie_series(field, E)
    total = (XD * E - D * XE) * prod_all
    EE = E * E
    for i, (C, l) in enumerate(cert.curve_terms):
        rest = SeriesPolyY.from_sparse(SparsePoly.constant(1, VARS))
        for j, (Cj, _) in enumerate(cert.curve_terms):
            if j != i:
                rest = rest * Cj
        total = total + (lie_series(field, C) * EE * rest).scale(l)
    div = SeriesPolyY.from_sparse(divergence(field))
    total = total - div * EE * prod_all
    total = SeriesPolyY([c if c.order is None else c.truncate(order) for c in total.coeffs])
    return _verdict(total, order)
