"""Sparse multivariate polynomials over the Gaussian rationals.

Terms are a map from exponent vectors to nonzero coefficients; the variable
tuple is always kept sorted so that representations are canonical and term
iteration (graded-lexicographic, descending) is reproducible byte for byte.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import NonScalarLeadingCoefficient
from .scalars import GaussianRational, ONE, ZERO

Exponents = tuple  # tuple[int, ...]


def _coeff(value) -> GaussianRational:
    if isinstance(value, GaussianRational):
        return value
    return GaussianRational(value)


class SparsePoly:
    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Iterable[str], terms: Mapping[Exponents, object]):
        variables = tuple(variables)
        if list(variables) != sorted(variables):
            order = sorted(range(len(variables)), key=lambda k: variables[k])
            remap = tuple(order)
            variables = tuple(sorted(variables))
            terms = {
                tuple(exps[k] for k in remap): c for exps, c in terms.items()
            }
        clean = {}
        nvars = len(variables)
        for exps, c in terms.items():
            c = _coeff(c)
            if not c:
                continue
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError("exponent vector length does not match variables")
            if exps in clean:
                c = clean[exps] + c
                if not c:
                    del clean[exps]
                    continue
            clean[exps] = c
        self.variables = variables
        self.terms = clean
        self._hash = None

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(variables: Iterable[str] = ()) -> "SparsePoly":
        return SparsePoly(variables, {})

    @staticmethod
    def constant(value, variables: Iterable[str] = ()) -> "SparsePoly":
        variables = tuple(variables)
        c = _coeff(value)
        if not c:
            return SparsePoly(variables, {})
        return SparsePoly(variables, {(0,) * len(variables): c})

    @staticmethod
    def variable(name: str, variables: Iterable[str] | None = None) -> "SparsePoly":
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            raise ValueError(f"{name!r} not among {variables}")
        exps = tuple(1 if v == name else 0 for v in sorted(variables))
        return SparsePoly(variables, {exps: ONE})

    # -- basic queries -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> GaussianRational:
        if not self.terms:
            return ZERO
        if not self.is_constant:
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        """Maximum exponent sum; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: str) -> int:
        if var not in self.variables or not self.terms:
            return 0 if self.terms else -1
        k = self.variables.index(var)
        return max(e[k] for e in self.terms)

    def used_variables(self) -> tuple:
        used = set()
        for exps in self.terms:
            for v, e in zip(self.variables, exps):
                if e:
                    used.add(v)
        return tuple(sorted(used))

    def coefficient(self, exps: Exponents) -> GaussianRational:
        return self.terms.get(tuple(exps), ZERO)

    # -- canonical ordering ------------------------------------------------

    def sorted_terms(self):
        """Terms in descending graded-lex order (deterministic)."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def leading_monomial(self) -> Exponents:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=lambda e: (sum(e), e))

    def leading_coefficient(self) -> GaussianRational:
        return self.terms[self.leading_monomial()]

    def monic(self) -> "SparsePoly":
        if not self.terms:
            return self
        lc = self.leading_coefficient()
        if lc == ONE:
            return self
        return self * (ONE / lc)

    # -- variable alignment --------------------------------------------------

    def with_variables(self, variables: Iterable[str]) -> "SparsePoly":
        """Re-embed into a superset of variables (sorted automatically)."""
        variables = tuple(sorted(variables))
        if variables == self.variables:
            return self
        missing = set(self.used_variables()) - set(variables)
        if missing:
            raise ValueError(f"cannot drop used variables {missing}")
        pos = {v: i for i, v in enumerate(variables)}
        n = len(variables)
        new_terms = {}
        for exps, c in self.terms.items():
            row = [0] * n
            for v, e in zip(self.variables, exps):
                if e:
                    row[pos[v]] = e
            new_terms[tuple(row)] = c
        return SparsePoly(variables, new_terms)

    def _align(self, other: "SparsePoly"):
        if self.variables == other.variables:
            return self, other
        merged = tuple(sorted(set(self.variables) | set(other.variables)))
        return self.with_variables(merged), other.with_variables(merged)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other, self.variables)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._align(other)
        terms = dict(a.terms)
        for exps, c in b.terms.items():
            s = terms.get(exps)
            s = c if s is None else s + c
            if s:
                terms[exps] = s
            elif exps in terms:
                del terms[exps]
        return SparsePoly(a.variables, terms)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other, self.variables)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return SparsePoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            c = _coeff(other)
            if not c:
                return SparsePoly.zero(self.variables)
            return SparsePoly(self.variables, {e: v * c for e, v in self.terms.items()})
        other = _as_poly(other, self.variables)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._align(other)
        terms = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = terms.get(e)
                p = c1 * c2
                s = p if s is None else s + p
                if s:
                    terms[e] = s
                elif e in terms:
                    del terms[e]
        return SparsePoly(a.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = SparsePoly.constant(1, self.variables)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    # -- calculus -------------------------------------------------------------

    def diff(self, var: str) -> "SparsePoly":
        if var not in self.variables:
            return SparsePoly.zero(self.variables)
        k = self.variables.index(var)
        terms = {}
        for exps, c in self.terms.items():
            e = exps[k]
            if not e:
                continue
            new = list(exps)
            new[k] = e - 1
            key = tuple(new)
            s = terms.get(key)
            p = c * e
            terms[key] = p if s is None else s + p
        return SparsePoly(self.variables, terms)

    def integrate(self, var: str) -> "SparsePoly":
        """Antiderivative in var with zero constant of integration."""
        variables = self.variables if var in self.variables else tuple(
            sorted(set(self.variables) | {var})
        )
        p = self.with_variables(variables)
        k = variables.index(var)
        terms = {}
        for exps, c in p.terms.items():
            new = list(exps)
            new[k] = exps[k] + 1
            terms[tuple(new)] = c * Fraction(1, exps[k] + 1)
        return SparsePoly(variables, terms)

    # -- substitution -----------------------------------------------------------

    def subs(self, assignment: Mapping[str, object]) -> "SparsePoly":
        """Substitute scalars or polynomials for variables, exactly."""
        if not assignment:
            return self
        values = {}
        remaining = []
        for v in self.variables:
            if v in assignment:
                val = assignment[v]
                if isinstance(val, SparsePoly):
                    values[v] = val
                else:
                    values[v] = SparsePoly.constant(_coeff(val))
            else:
                remaining.append(v)
        result_vars = set(remaining)
        for val in values.values():
            result_vars.update(val.used_variables())
        result_vars = tuple(sorted(result_vars))
        result = SparsePoly.zero(result_vars)
        powers = {v: {0: SparsePoly.constant(1, result_vars)} for v in values}
        for exps, c in self.terms.items():
            piece = SparsePoly.constant(c, result_vars)
            for v, e in zip(self.variables, exps):
                if not e:
                    continue
                if v in values:
                    cache = powers[v]
                    if e not in cache:
                        cache[e] = values[v] ** e
                    piece = piece * cache[e]
                else:
                    piece = piece * SparsePoly.variable(v, result_vars) ** e
            result = result + piece
        return result

    def eval_scalar(self, assignment: Mapping[str, object]) -> GaussianRational:
        """Evaluate with a scalar for every used variable."""
        result = self.subs(assignment)
        return result.constant_value()

    # -- division ------------------------------------------------------------

    def as_univariate(self, var: str) -> dict:
        """View as a polynomial in var with SparsePoly coefficients."""
        if var not in self.variables:
            return {0: self} if self.terms else {}
        k = self.variables.index(var)
        rest = self.variables[:k] + self.variables[k + 1:]
        out = {}
        for exps, c in self.terms.items():
            d = exps[k]
            key = exps[:k] + exps[k + 1:]
            bucket = out.setdefault(d, {})
            bucket[key] = bucket.get(key, ZERO) + c
        return {d: SparsePoly(rest, t) for d, t in out.items() if any(t.values())}

    @staticmethod
    def from_univariate(coeffs: Mapping[int, "SparsePoly"], var: str) -> "SparsePoly":
        variables = {var}
        for p in coeffs.values():
            variables.update(p.variables)
        variables = tuple(sorted(variables))
        k = variables.index(var)
        terms = {}
        for d, p in coeffs.items():
            p = p.with_variables(tuple(v for v in variables if v != var))
            for exps, c in p.terms.items():
                row = list(exps[:k]) + [d] + list(exps[k:])
                terms[tuple(row)] = c
        return SparsePoly(variables, terms)


class DivRem:
    """Result of division in one variable: scale * f = quotient * g + remainder."""

    __slots__ = ("quotient", "remainder", "scale")

    def __init__(self, quotient, remainder, scale):
        self.quotient = quotient
        self.remainder = remainder
        self.scale = scale

    def __iter__(self):
        return iter((self.quotient, self.remainder))


def poly_divrem(f: SparsePoly, g: SparsePoly, var: str, pseudo: bool = False) -> DivRem:
    """Divide f by g in the given variable.

    Plain division requires the leading coefficient of g in var to be a
    scalar; otherwise pass pseudo=True to get a pseudo-division where
    scale = lc(g)^k multiplies f in the returned identity.
    """
    if g.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    f, g = f._align(g)
    gc = g.as_univariate(var)
    dg = max(gc) if gc else 0
    lc_g = gc[dg]
    variables = f.variables
    one = SparsePoly.constant(1, variables)
    if dg == 0:
        if not lc_g.is_constant:
            if not pseudo:
                raise NonScalarLeadingCoefficient(
                    f"divisor {g} is free of {var} but not scalar"
                )
            return DivRem(f, SparsePoly.zero(variables), lc_g)
        c = lc_g.constant_value()
        return DivRem(f * (ONE / c), SparsePoly.zero(variables), one)
    scalar_lead = lc_g.is_constant
    if not scalar_lead and not pseudo:
        raise NonScalarLeadingCoefficient(
            f"leading coefficient of divisor in {var} is {lc_g}, not a scalar"
        )
    q = SparsePoly.zero(variables)
    r = f
    scale = one
    xv = SparsePoly.variable(var, variables)
    while True:
        rc = r.as_univariate(var)
        dr = max(rc) if rc else -1
        if dr < dg or r.is_zero:
            break
        lc_r = rc[dr]
        if scalar_lead:
            t = (lc_r * (ONE / lc_g.constant_value())).with_variables(variables) * xv ** (dr - dg)
            q = q + t
            r = r - t * g
        else:
            # pseudo step: lc_g * r - lc_r * x^(dr-dg) * g
            q = q * lc_g + lc_r.with_variables(variables) * xv ** (dr - dg)
            r = r * lc_g - lc_r.with_variables(variables) * xv ** (dr - dg) * g
            scale = scale * lc_g
    return DivRem(q, r, scale)


def exact_div(f: SparsePoly, g: SparsePoly):
    """Return f / g when g divides f exactly, else None."""
    if g.is_zero:
        return None
    if f.is_zero:
        return SparsePoly.zero(f.variables)
    f, g = f._align(g)
    glm = g.leading_monomial()
    glc = g.terms[glm]
    q_terms = {}
    r = f
    while not r.is_zero:
        rlm = r.leading_monomial()
        diff = tuple(a - b for a, b in zip(rlm, glm))
        if any(d < 0 for d in diff):
            return None
        c = r.terms[rlm] / glc
        q_terms[diff] = c
        r = r - SparsePoly(g.variables, {diff: c}) * g
    return SparsePoly(g.variables, q_terms)


def divides(g: SparsePoly, f: SparsePoly) -> bool:
    return exact_div(f, g) is not None


def _content_and_primitive(coeffs: dict):
    """gcd of the coefficient polynomials and the primitive coefficient list."""
    cont = None
    for p in coeffs.values():
        cont = p if cont is None else poly_gcd(cont, p)
        if cont.is_constant and not cont.is_zero:
            cont = SparsePoly.constant(1, cont.variables)
            break
    prim = {d: exact_div(p, cont) for d, p in coeffs.items()}
    return cont, prim


def poly_gcd(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    """gcd over Q(i), normalized monic with respect to graded-lex."""
    if f.is_zero:
        return g.monic()
    if g.is_zero:
        return f.monic()
    if f.is_constant or g.is_constant:
        return SparsePoly.constant(1, f.variables)
    common = [v for v in f.used_variables() if v in set(g.used_variables())]
    if not common:
        return SparsePoly.constant(1, f.variables)
    var = common[-1]
    fc = f.as_univariate(var)
    gc = g.as_univariate(var)
    cont_f, fp = _content_and_primitive(fc)
    cont_g, gp = _content_and_primitive(gc)
    cont = poly_gcd(cont_f, cont_g)
    a = SparsePoly.from_univariate(fp, var)
    b = SparsePoly.from_univariate(gp, var)
    # primitive Euclidean remainder sequence
    while not b.is_zero:
        if b.degree_in(var) <= 0:
            # nonzero content-free element of lower ring: coprime in var
            a = SparsePoly.constant(1, a.variables)
            break
        r = poly_divrem(a, b, var, pseudo=True).remainder
        if r.is_zero:
            a = b
            break
        rc = r.as_univariate(var)
        _, rp = _content_and_primitive(rc)
        a, b = b, SparsePoly.from_univariate(rp, var)
    return (cont * a).monic()


# -- canonical printing ------------------------------------------------------


def _monomial_str(variables, exps) -> str:
    parts = []
    for v, e in zip(variables, exps):
        if e == 0:
            continue
        parts.append(v if e == 1 else f"{v}^{e}")
    return "*".join(parts)


def _coeff_prefix(c: GaussianRational) -> str:
    """Coefficient text suitable for prefixing '*monomial'."""
    if c.im == 0:
        return str(c.re)
    if c.re == 0:
        if c.im == 1:
            return "i"
        if c.im == -1:
            return "-i"
        return f"{c.im}*i"
    return f"({c})"


def poly_str(p: SparsePoly) -> str:
    """Canonical text form; parsing it back reproduces the polynomial."""
    if p.is_zero:
        return "0"
    pieces = []
    for exps, c in p.sorted_terms():
        mono = _monomial_str(p.variables, exps)
        if not mono:
            text = str(c) if c.im == 0 or c.re == 0 else f"({c})"
            if c.re != 0 and c.im != 0:
                text = str(c)
        elif c == ONE:
            text = mono
        elif c == -ONE:
            text = f"-{mono}"
        else:
            text = f"{_coeff_prefix(c)}*{mono}"
        pieces.append(text)
    out = pieces[0]
    for piece in pieces[1:]:
        if piece.startswith("-"):
            out += f" - {piece[1:]}"
        else:
            out += f" + {piece}"
    return out


SparsePoly.__str__ = lambda self: poly_str(self)
SparsePoly.__repr__ = lambda self: f"SparsePoly({poly_str(self)})"


def _poly_eq(self, other):
    if isinstance(other, (int, Fraction, GaussianRational)):
        other = SparsePoly.constant(_coeff(other), self.variables)
    if not isinstance(other, SparsePoly):
        return NotImplemented
    a, b = self._align(other)
    return a.terms == b.terms


def _poly_hash(self):
    if self._hash is None:
        used = self.used_variables()
        canon = self.with_variables(used) if used != self.variables else self
        self._hash = hash((canon.variables, frozenset(canon.terms.items())))
    return self._hash


SparsePoly.__eq__ = _poly_eq
SparsePoly.__hash__ = _poly_hash


def _as_poly(value, variables):
    if isinstance(value, SparsePoly):
        return value
    if isinstance(value, (int, Fraction, GaussianRational)):
        return SparsePoly.constant(_coeff(value), variables)
    return NotImplemented
