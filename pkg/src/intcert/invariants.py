"""Invariant algebraic curves, exponential factors, and polynomial solutions.

The searches set up undetermined-coefficient ansatz systems.  Curve and
polynomial-solution systems are bilinear and go through polysolve; the
exponential-factor identity is linear and is solved by exact linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    SparsePoly,
    ZERO,
    exact_div,
    eliminate_vector,
    nullspace,
)
from .errors import NotInvariant, NotZeroDimensional, ResourceLimit
from .polysolve import (
    DEFAULT_CONFIG,
    GroebnerConfig,
    Ideal,
    reduce_modulo,
    solve_zero_dim,
)
from .vectorfield import VectorField, lie_derivative

VARS = ("x", "y")


@dataclass(frozen=True)
class InvariantCurve:
    """C with X(C) = K * C; K is the cofactor, deg K <= m - 1."""

    C: SparsePoly
    K: SparsePoly

    def __str__(self):
        return f"C = {self.C}  (cofactor {self.K})"


@dataclass(frozen=True)
class ExpFactor:
    """exp(h / g^n) with cofactor L: X(h) - n h K_g = L g^n.

    For g = 1 the identity is simply X(h) = L.  kg is g's own cofactor
    (the zero polynomial when g = 1).
    """

    h: SparsePoly
    g: SparsePoly
    n: int
    L: SparsePoly
    kg: SparsePoly

    def __str__(self):
        if self.g.is_constant:
            return f"exp({self.h})  (cofactor {self.L})"
        return f"exp(({self.h})/({self.g})^{self.n})  (cofactor {self.L})"


@dataclass(frozen=True)
class PolynomialSolution:
    """Univariate g(x) with P(x,g) g' - Q(x,g) = 0."""

    g: SparsePoly

    def __str__(self):
        return f"y = {self.g}"


@dataclass(frozen=True)
class SolutionFamily:
    """A positive-dimensional branch, shown by a representative with the
    free unknowns renamed t0, t1, ... (members other than the
    representative are not enumerated)."""

    representative: SparsePoly
    parameters: tuple

    def __str__(self):
        return f"{self.representative}  (free: {', '.join(self.parameters)})"


@dataclass(frozen=True)
class CurveFamily:
    """A family of invariant curves; the representative pins the free
    parameters to zero and carries its own verified cofactor."""

    curve: InvariantCurve
    parameters: tuple

    def __str__(self):
        return f"{self.curve}  (family with {len(self.parameters)} free parameters)"


@dataclass
class CurveSearchResult:
    curves: list
    families: list
    complete: bool


@dataclass
class PolySolutionResult:
    solutions: list
    families: list
    complete: bool


def verify_invariant_curve(field: VectorField, C: SparsePoly, K: SparsePoly):
    """(ok, residual) where residual = X(C) - K*C."""
    if C.is_constant:
        raise ValueError("an invariant curve must be nonconstant")
    residual = lie_derivative(field, C) - K * C
    return residual.is_zero, residual


def cofactor_of(field: VectorField, C: SparsePoly) -> SparsePoly:
    """The exact cofactor X(C)/C, or raise NotInvariant."""
    q = exact_div(lie_derivative(field, C), C)
    if q is None:
        raise NotInvariant(f"{C} is not invariant for {field}")
    return q


def _monomials_upto(degree: int):
    """(ex, ey) with ex + ey <= degree, ascending graded-lex."""
    out = []
    for d in range(degree + 1):
        for ex in range(d + 1):
            out.append((ex, d - ex))
    out.sort(key=lambda e: (sum(e), e))
    return out


def _grlex_less(a, b):
    return (sum(a), a) < (sum(b), b)


def _coefficients_wrt_xy(p: SparsePoly):
    """Split a mixed polynomial into {(ex,ey): coefficient-poly-in-unknowns}."""
    ix = p.variables.index("x") if "x" in p.variables else None
    iy = p.variables.index("y") if "y" in p.variables else None
    rest = tuple(v for v in p.variables if v not in VARS)
    buckets = {}
    for exps, c in p.terms.items():
        ex = exps[ix] if ix is not None else 0
        ey = exps[iy] if iy is not None else 0
        key = tuple(e for v, e in zip(p.variables, exps) if v not in VARS)
        bucket = buckets.setdefault((ex, ey), {})
        bucket[key] = bucket.get(key, ZERO) + c
    return {k: SparsePoly(rest, t) for k, t in buckets.items()}


def _ansatz(prefix: str, monomials) -> tuple:
    """Polynomial sum(u_k * monomial_k) plus the unknown-name list."""
    names = [f"{prefix}{k}" for k in range(len(monomials))]
    variables = tuple(sorted(set(names) | set(VARS)))
    poly = SparsePoly.zero(variables)
    for name, (ex, ey) in zip(names, monomials):
        term = (
            SparsePoly.variable(name, variables)
            * SparsePoly.variable("x", variables) ** ex
            * SparsePoly.variable("y", variables) ** ey
        )
        poly = poly + term
    return poly, names


def find_invariant_curves(
    field: VectorField,
    max_degree: int,
    config: GroebnerConfig = DEFAULT_CONFIG,
) -> CurveSearchResult:
    """All invariant algebraic curves over Q(i) of degree <= max_degree.

    One search branch per candidate leading monomial: that coefficient is
    pinned to 1 and every graded-lex-greater coefficient to 0, which removes
    the scalar gauge.  Positive-dimensional branches are reported as
    families; products of lower-degree curves are pruned by trial division.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    m = field.degree
    k_monos = _monomials_upto(max(m - 1, 0))
    found = []
    families = []
    complete = True
    for lead in _monomials_upto(max_degree):
        if sum(lead) == 0:
            continue
        lower = [mono for mono in _monomials_upto(max_degree) if _grlex_less(mono, lead)]
        cpoly, cnames = _ansatz("u", lower)
        variables = tuple(sorted(set(cpoly.variables) | {"x", "y"}))
        lead_term = (
            SparsePoly.variable("x", VARS) ** lead[0]
            * SparsePoly.variable("y", VARS) ** lead[1]
        )
        C = cpoly + lead_term.with_variables(variables)
        Kpoly, knames = _ansatz("w", k_monos)
        equation = lie_derivative(field, C) - Kpoly * C
        gens = [g for g in _coefficients_wrt_xy(equation).values() if not g.is_zero]
        unknowns = tuple(sorted(knames)) + tuple(sorted(cnames))
        try:
            sols = solve_zero_dim(Ideal(tuple(gens), unknowns), config)
        except NotZeroDimensional as exc:
            fam = _family_representative(
                field, gens, unknowns, exc, C, cnames, Kpoly, knames, config
            )
            if fam is not None:
                families.append(fam)
            continue
        complete = complete and sols.complete
        for point in sols.points:
            c_val = C.subs({n: point[n] for n in cnames})
            k_val = Kpoly.subs({n: point[n] for n in knames})
            c_val = c_val.with_variables(VARS)
            k_val = k_val.with_variables(VARS)
            curve = InvariantCurve(c_val, k_val)
            ok, residual = verify_invariant_curve(field, c_val, k_val)
            if not ok:
                raise ArithmeticError(f"solver returned a non-invariant curve: {residual}")
            found.append(curve)
    found.sort(key=_curve_sort_key)
    found = _prune_products(found)
    families = _prune_family_products(found, families)
    return CurveSearchResult(found, families, complete)


def _family_representative(
    field, gens, unknowns, exc, C, cnames, Kpoly, knames, config
):
    """Pin free unknowns to 0 until the branch becomes zero-dimensional."""
    pinned = {}
    free_order = []
    gens = list(gens)
    remaining = list(unknowns)
    guard = 0
    while True:
        guard += 1
        if guard > len(unknowns) + 2:
            return None
        frees = [v for v in exc.free_vars if v in remaining]
        if not frees:
            return None
        for v in frees:
            pinned[v] = ZERO
            free_order.append(v)
            remaining.remove(v)
        gens = [g.subs({v: ZERO for v in frees}) for g in gens]
        gens = [g for g in gens if not g.is_zero]
        if not remaining:
            points = [{}] if all(g.is_zero for g in gens) else []
            break
        try:
            sols = solve_zero_dim(Ideal(tuple(gens), tuple(remaining)), config)
            points = sols.points
            break
        except NotZeroDimensional as nexc:
            exc = nexc
            continue
    if not points:
        return None
    point = points[0]
    point.update(pinned)
    c_val = C.subs({n: point[n] for n in cnames}).with_variables(VARS)
    k_val = Kpoly.subs({n: point[n] for n in knames}).with_variables(VARS)
    ok, residual = verify_invariant_curve(field, c_val, k_val)
    if not ok:
        raise ArithmeticError(f"family representative fails invariance: {residual}")
    params = tuple(
        f"t{k}" for k in range(len([v for v in free_order if v in cnames]))
    )
    return CurveFamily(InvariantCurve(c_val, k_val), params)


def _prune_family_products(curves, families):
    """Drop family representatives that factor over found curves/families."""
    kept = []
    pool = [c.C for c in curves]
    for fam in families:
        residual = fam.curve.C
        progress = True
        while progress and not residual.is_constant:
            progress = False
            for p in pool:
                q = exact_div(residual, p)
                if q is not None:
                    residual = q
                    progress = True
                    break
        if residual.is_constant:
            continue
        kept.append(fam)
        pool.append(fam.curve.C)
    return kept


def curve_sort_key(curve: InvariantCurve):
    """Degree ascending, then leading monomial graded-lex descending."""
    lm = curve.C.leading_monomial()
    return (curve.C.total_degree(), tuple(-e for e in lm), str(curve.C))


_curve_sort_key = curve_sort_key


def _prune_products(curves):
    """Drop curves that are products of previously accepted ones."""
    accepted = []
    for cur in curves:
        residual = cur.C
        progress = True
        while progress and not residual.is_constant:
            progress = False
            for other in accepted:
                q = exact_div(residual, other.C)
                if q is not None:
                    residual = q
                    progress = True
                    break
        if residual.is_constant:
            continue
        accepted.append(cur)
    return accepted


def find_exp_factors(
    field: VectorField,
    g: SparsePoly | None,
    n: int = 1,
    deg_h: int | None = None,
) -> list:
    """Basis of exponential factors exp(h/g^n) with polynomial cofactors.

    The identity X(h) - n h K_g = L g^n is linear in (h, L) once K_g is
    known, so the solution space comes from an exact nullspace.  The trivial
    direction h = c g^n (constant exponential) is quotiented away.
    """
    m = field.degree
    one = SparsePoly.constant(1, VARS)
    if g is None or g.is_constant:
        g = one
        kg = SparsePoly.zero(VARS)
    else:
        g = g.with_variables(VARS)
        kg = cofactor_of(field, g)
    if n < 1:
        raise ValueError("n must be a positive integer")
    if deg_h is None:
        deg_h = n * max(g.total_degree(), 0) + max(m - 1, 0)
    h_monos = _monomials_upto(deg_h)
    l_monos = _monomials_upto(max(m - 1, 0))
    gn = g ** n
    columns = []
    for ex, ey in h_monos:
        hm = SparsePoly.variable("x", VARS) ** ex * SparsePoly.variable("y", VARS) ** ey
        columns.append(lie_derivative(field, hm) - hm * kg * n)
    for ex, ey in l_monos:
        lm = SparsePoly.variable("x", VARS) ** ex * SparsePoly.variable("y", VARS) ** ey
        columns.append(-(lm * gn))
    support = set()
    for col in columns:
        support.update(col.with_variables(VARS).terms)
    support = sorted(support, key=lambda e: (sum(e), e))
    rows = []
    for mono in support:
        rows.append([col.with_variables(VARS).coefficient(mono) for col in columns])
    basis = nullspace(rows, ncols=len(columns))
    # quotient out the trivial direction exp(c * g^n / g^n) = exp(c)
    if gn.total_degree() <= deg_h:
        trivial = [ZERO] * len(columns)
        for k, mono in enumerate(h_monos):
            trivial[k] = gn.with_variables(VARS).coefficient(mono)
        if any(trivial):
            basis = eliminate_vector(basis, trivial)
    factors = []
    nh = len(h_monos)
    for vec in basis:
        h = SparsePoly.zero(VARS)
        for coeff, (ex, ey) in zip(vec[:nh], h_monos):
            if coeff:
                h = h + SparsePoly(VARS, {(ex, ey): coeff})
        L = SparsePoly.zero(VARS)
        for coeff, (ex, ey) in zip(vec[nh:], l_monos):
            if coeff:
                L = L + SparsePoly(VARS, {(ex, ey): coeff})
        if h.is_zero:
            continue
        residual = lie_derivative(field, h) - h * kg * n - L * gn
        if not residual.is_zero:
            raise ArithmeticError("nullspace produced a non-solution")
        factors.append(ExpFactor(h, g, n, L, kg))
    factors.sort(key=lambda f: (f.h.total_degree(), str(f.h)))
    return factors


def find_polynomial_solutions(
    field: VectorField,
    max_degree: int,
    config: GroebnerConfig = DEFAULT_CONFIG,
) -> PolySolutionResult:
    """Polynomial solutions y = g(x) of P g' = Q, degree by degree."""
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    solutions = {}
    families = []
    complete = True
    for deg in range(max_degree + 1):
        names = [f"u{k}" for k in range(deg + 1)]
        variables = tuple(sorted(set(names) | {"x"}))
        g = SparsePoly.zero(variables)
        for k, name in enumerate(names):
            g = g + SparsePoly.variable(name, variables) * SparsePoly.variable("x", variables) ** k
        gprime = g.diff("x")
        residual = field.P.subs({"y": g}) * gprime - field.Q.subs({"y": g})
        buckets = residual.as_univariate("x")
        gens = [p for p in buckets.values() if not p.is_zero]
        if not gens:
            # every coefficient choice works; the whole ansatz is a family
            families.append(SolutionFamily(_pretty_family(g, names), tuple(f"t{k}" for k in range(len(names)))))
            continue
        if any(p.is_constant for p in gens):
            continue
        unknowns = tuple(sorted(names))
        try:
            sols = solve_zero_dim(Ideal(tuple(gens), unknowns), config)
        except NotZeroDimensional:
            rep = _poly_solution_family(gens, unknowns, g)
            if rep is not None:
                families.append(rep)
            continue
        complete = complete and sols.complete
        for point in sols.points:
            gval = g.subs(point).with_variables(("x",))
            check = field.P.subs({"y": gval}) * gval.diff("x") - field.Q.subs({"y": gval})
            if not check.is_zero:
                raise ArithmeticError("solver returned a non-solution")
            solutions[str(gval)] = PolynomialSolution(gval)
    ordered = sorted(
        solutions.values(), key=lambda s: (s.g.total_degree(), str(s.g))
    )
    families = _dedupe_families(families)
    return PolySolutionResult(ordered, families, complete)


def _poly_solution_family(gens, unknowns, ansatz):
    """Normal-form the ansatz against the branch ideal to show the family."""
    from .polysolve import groebner

    try:
        basis = groebner(Ideal(tuple(gens), tuple(unknowns)), DEFAULT_CONFIG)
        rep = reduce_modulo(ansatz, basis, tuple(sorted(set(unknowns) | {"x"})))
    except ResourceLimit:
        return None
    renames = {}
    params = []
    for k, v in enumerate(sorted(set(rep.used_variables()) - {"x"})):
        t = f"t{k}"
        renames[v] = SparsePoly.variable(t, (t,))
        params.append(t)
    if renames:
        rep = rep.subs(renames)
    return SolutionFamily(rep, tuple(params))


def _pretty_family(g, names):
    renames = {}
    for k, name in enumerate(names):
        renames[name] = SparsePoly.variable(f"t{k}", (f"t{k}",))
    return g.subs(renames)


def _dedupe_families(families):
    seen = set()
    out = []
    for f in families:
        key = str(f.representative)
        if key not in seen:
            seen.add(key)
            out.append(f)
    return out
