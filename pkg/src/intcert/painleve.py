"""Product-form integrating factors alpha(x) S(x,y) / prod (y - g_i(x)).

The search eliminates the quadrature symbol: with W_i = (Q - P g_i')/(y - g_i)
exact polynomials, M is an integrating factor iff

    r P S + X(S) + (div - sum W_i) S = 0,      r = alpha'/alpha.

Requiring T = (X(S) + (div - sum W_i) S)/(P S) to be independent of y turns
the bilinear (alpha, S) problem into a polynomial system in S alone; then
r = -T and alpha = exp(int r dx) by logarithmic quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    GaussianRational,
    RationalFunction,
    SparsePoly,
    SymbolicExpIntegral,
    ZERO,
    exact_div,
    log_quadrature,
    poly_divrem,
)
from .darboux import (
    DarbouxCertificate,
    INVERSE_INTEGRATING_FACTOR,
    verify_certificate,
)
from .errors import (
    NonConstantExponents,
    NoSolution,
    NotZeroDimensional,
    UnsupportedDenominator,
)
from .invariants import ExpFactor, InvariantCurve, cofactor_of
from .polysolve import DEFAULT_CONFIG, GroebnerConfig, Ideal, solve_zero_dim
from .vectorfield import VectorField, divergence, lie_derivative

VARS = ("x", "y")


@dataclass(frozen=True)
class PainleveIntegratingFactor:
    """M = alpha(x) S / prod (y - g_i); alpha may be unavailable when its
    quadrature needs roots outside Q(i) (then quadrature_only is set and r
    still certifies the factor)."""

    solutions: tuple  # PolynomialSolution, distinct
    S: SparsePoly
    r: RationalFunction
    alpha: SymbolicExpIntegral | None
    quadrature_only: bool = False

    def denominator(self) -> SparsePoly:
        y = SparsePoly.variable("y", VARS)
        prod = SparsePoly.constant(1, VARS)
        for sol in self.solutions:
            prod = prod * (y - sol.g.with_variables(VARS))
        return prod

    def __str__(self):
        alpha = str(self.alpha) if self.alpha is not None else "exp(int r dx)"
        return f"({alpha}) * ({self.S}) / ({self.denominator()})"


@dataclass(frozen=True)
class PainleveFirstIntegral:
    """I = prod (y - g_i)^a_i * h(x) with constant nonzero exponents."""

    terms: tuple  # ((PolynomialSolution, GaussianRational), ...)
    h: SymbolicExpIntegral
    log_h_derivative: RationalFunction

    def __str__(self):
        bits = [f"(y - ({sol.g}))^({a})" for sol, a in self.terms]
        bits.append(f"({self.h})")
        return " * ".join(bits)


@dataclass(frozen=True)
class Theorem6Classification:
    """Case (a): two projectively different factors, Riccati-reducible, with
    a verified first-integral ratio.  Case (b): a single projective class,
    converted into a Darboux inverse-integrating-factor certificate."""

    case: str  # 'a' | 'b'
    fi_ratio: "FactorRatio | None"
    certificate: DarbouxCertificate | None
    notes: tuple = ()


@dataclass(frozen=True)
class FactorRatio:
    """M2/M1 presented as exact pieces: d/dx log(alpha2/alpha1) and S2/S1."""

    r_difference: RationalFunction
    s_ratio: RationalFunction
    alpha_ratio: SymbolicExpIntegral | None
    verified: bool


def waterfall_polynomials(field: VectorField, solutions) -> list:
    """W_i = (Q - P g_i')/(y - g_i), exact by the factor theorem."""
    out = []
    y = SparsePoly.variable("y", VARS)
    for sol in solutions:
        g = sol.g.with_variables(VARS)
        numerator = field.Q - field.P * g.diff("x")
        quotient, remainder = poly_divrem(numerator, y - g, "y")
        if not remainder.is_zero:
            raise ValueError(f"y = {sol.g} is not a solution of the system")
        out.append(quotient)
    return out


def _monomial_grid(deg_x: int, deg_y: int):
    grid = [(ex, ey) for ex in range(deg_x + 1) for ey in range(deg_y + 1)]
    grid.sort(key=lambda e: (sum(e), e))
    return grid


def painleve_search(
    field: VectorField,
    solutions,
    deg_y_S: int | None = None,
    deg_x_S: int = 0,
    config: GroebnerConfig = DEFAULT_CONFIG,
) -> list:
    """Integrating factors alpha S / prod(y - g_i) for the given solutions.

    deg_y_S defaults to max(len(solutions) - degree - 1, 0), the classical
    count; both S degrees are explicit search knobs.  Results are
    deduplicated projectively (scalar multiples collapse).
    """
    solutions = tuple(solutions)
    if len({str(s.g) for s in solutions}) != len(solutions):
        raise ValueError("particular solutions must be distinct")
    if deg_y_S is None:
        deg_y_S = max(len(solutions) - field.degree - 1, 0)
    W = waterfall_polynomials(field, solutions)
    drift = divergence(field)
    for w in W:
        drift = drift - w
    found = []
    grid = _monomial_grid(deg_x_S, deg_y_S)
    for lead in grid:
        lower = [m for m in grid if (sum(m), m) < (sum(lead), lead)]
        names = [f"s{k}" for k in range(len(lower))]
        variables = tuple(sorted(set(names) | set(VARS)))
        S = (
            SparsePoly.variable("x", VARS) ** lead[0]
            * SparsePoly.variable("y", VARS) ** lead[1]
        ).with_variables(variables)
        for name, (ex, ey) in zip(names, lower):
            S = S + (
                SparsePoly.variable(name, variables)
                * SparsePoly.variable("x", variables) ** ex
                * SparsePoly.variable("y", variables) ** ey
            )
        N = lie_derivative(field, S) + drift * S
        D = field.P * S
        # independence of y: N_y D - N D_y = 0 identically
        condition = N.diff("y") * D - N * D.diff("y")
        buckets = _coefficients_wrt_xy(condition)
        gens = [p for p in buckets.values() if not p.is_zero]
        candidates = []
        if not names:
            if all(g.is_zero for g in gens):
                candidates.append(S.with_variables(VARS))
        else:
            if any(g.is_constant and not g.is_zero for g in gens):
                continue
            try:
                sols = solve_zero_dim(Ideal(tuple(gens), tuple(sorted(names))), config)
            except NotZeroDimensional:
                continue
            for point in sols.points:
                candidates.append(S.subs(point).with_variables(VARS))
        for S_val in candidates:
            factor = _build_factor(field, solutions, W, drift, S_val)
            if factor is not None and not _projectively_known(found, factor):
                found.append(factor)
    if not found:
        raise NoSolution(
            "no integrating factor of product form at these S degrees"
        )
    return found


def _build_factor(field, solutions, W, drift, S_val):
    numerator = lie_derivative(field, S_val) + drift * S_val
    T = RationalFunction(numerator, field.P * S_val)
    if "y" in T.used_variables():
        raise ArithmeticError("independence conditions failed to remove y")
    r = RationalFunction(
        _strip_to_x(-T.num), _strip_to_x(T.den), reduce=False
    )
    quadrature_only = False
    alpha = None
    try:
        alpha = log_quadrature(r, "x")
    except UnsupportedDenominator:
        quadrature_only = True
    # defining identity: r P S + X(S) + drift S = 0, cleared of r's denominator
    check = r.num * field.P * S_val + r.den * (
        lie_derivative(field, S_val) + drift * S_val
    )
    if not check.is_zero:
        raise ArithmeticError("integrating factor candidate fails its identity")
    return PainleveIntegratingFactor(
        tuple(solutions), S_val, r, alpha, quadrature_only
    )


def _strip_to_x(p: SparsePoly) -> SparsePoly:
    used = p.used_variables()
    if "y" in used:
        raise ArithmeticError("expected an x-only polynomial")
    return p.with_variables(("x",))


def _projectively_known(found, factor) -> bool:
    for other in found:
        if _projective_ratio_constant(other, factor):
            return True
    return False


def _projective_ratio_constant(m1: PainleveIntegratingFactor, m2) -> bool:
    """True when M2/M1 is a constant (same solutions assumed)."""
    ratio = RationalFunction(m2.S, m1.S)
    if "y" in ratio.used_variables():
        return False
    diff = m2.r - m1.r
    log_ratio = ratio.diff("x") / ratio
    return (diff + log_ratio).is_zero


def _coefficients_wrt_xy(p: SparsePoly):
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


def painleve_first_integral(
    field: VectorField, M: PainleveIntegratingFactor
) -> PainleveFirstIntegral:
    """Recover I = prod (y - g_i)^a_i h(x) from a verified product factor.

    The y-partial-fraction residues of -S P / prod(y - g_i), scaled by
    alpha, must be nonzero constants; those are the exponents.  Then
    (log h)' must reduce to an x-only rational function, integrated by
    logarithmic quadrature.
    """
    if M.alpha is None:
        raise UnsupportedDenominator("alpha is only available as a quadrature")
    solutions = M.solutions
    denom = M.denominator()
    SP = M.S * field.P
    if SP.degree_in("y") >= len(solutions):
        raise NonConstantExponents(
            "S P has a polynomial part in y; the product ansatz cannot hold"
        )
    alpha_rational = M.alpha.as_rational()
    exponents = []
    for i, sol in enumerate(solutions):
        g = sol.g.with_variables(VARS)
        others = SparsePoly.constant(1, VARS)
        for j, other in enumerate(solutions):
            if j != i:
                others = others * (g - other.g.with_variables(VARS))
        residue_num = -(SP.subs({"y": g}))
        A_i = RationalFunction(residue_num, others)
        # alpha * A_i must be a nonzero constant
        if A_i.is_zero:
            raise NonConstantExponents(f"zero exponent over y - ({sol.g})")
        log_deriv = M.r + A_i.diff("x") / A_i
        if not log_deriv.is_zero:
            raise NonConstantExponents(
                f"exponent over y - ({sol.g}) depends on x"
            )
        if alpha_rational is None:
            raise NonConstantExponents(
                "alpha is not rational though exponents are constant"
            )
        value = alpha_rational * A_i
        if not value.is_constant:
            raise ArithmeticError("constant exponent did not reduce to a constant")
        exponents.append(value.constant_value())
    # (log h)' = alpha S Q / prod + sum a_i g_i' / (y - g_i), must be x-only
    y = SparsePoly.variable("y", VARS)
    total = alpha_rational * RationalFunction(M.S * field.Q, denom)
    for (sol, a) in zip(solutions, exponents):
        g = sol.g.with_variables(VARS)
        total = total + RationalFunction(
            g.diff("x") * a, y - g
        )
    if "y" in total.used_variables():
        raise NonConstantExponents("(log h)' failed to reduce to a function of x")
    log_h = RationalFunction(_strip_to_x(total.num), _strip_to_x(total.den), reduce=False)
    h = log_quadrature(log_h, "x")
    terms = tuple(zip(solutions, exponents))
    # exact verification: sum a_i W_i + P (log h)' = 0
    W = waterfall_polynomials(field, solutions)
    residual = RationalFunction(SparsePoly.zero(VARS))
    for (sol, a), w in zip(terms, W):
        residual = residual + RationalFunction(w * a, SparsePoly.constant(1, VARS))
    residual = residual + RationalFunction(field.P) * log_h
    if not residual.is_zero:
        raise ArithmeticError("first integral fails X(log I) = 0")
    return PainleveFirstIntegral(terms, h, log_h)


def theorem6_classify(field: VectorField, results) -> Theorem6Classification:
    """Split search results into projective classes and classify.

    Two or more classes: Riccati-reducible (case a), with the ratio of two
    factors emitted as a verified first integral.  One class: case b, and
    V = 1/M becomes a Darboux inverse-integrating-factor certificate built
    from the y - g_i curves and the product form of 1/alpha.
    """
    results = list(results)
    if not results:
        raise ValueError("classification needs at least one integrating factor")
    classes = []
    for m in results:
        for cls in classes:
            if _projective_ratio_constant(cls[0], m):
                cls.append(m)
                break
        else:
            classes.append([m])
    if len(classes) >= 2:
        m1, m2 = classes[0][0], classes[1][0]
        ratio = FactorRatio(
            r_difference=m2.r - m1.r,
            s_ratio=RationalFunction(m2.S, m1.S),
            alpha_ratio=(m2.alpha * m1.alpha.inverse())
            if (m1.alpha is not None and m2.alpha is not None)
            else None,
            verified=_verify_ratio_is_first_integral(field, m1, m2),
        )
        return Theorem6Classification("a", ratio, None, ("Riccati-reducible",))
    m = classes[0][0]
    cert, notes = _case_b_certificate(field, m)
    return Theorem6Classification("b", None, cert, tuple(notes))


def _verify_ratio_is_first_integral(field, m1, m2) -> bool:
    """X(log(M2/M1)) = P (r2 - r1) + X(S2)/S2 - X(S1)/S1 = 0, exactly."""
    p = RationalFunction(field.P)
    total = p * (m2.r - m1.r)
    total = total + RationalFunction(lie_derivative(field, m2.S), m2.S)
    total = total - RationalFunction(lie_derivative(field, m1.S), m1.S)
    return total.is_zero


def _case_b_certificate(field, m: PainleveIntegratingFactor):
    """V = 1/M as curve terms (y - g_i, +1), S as a curve term of exponent
    -1 when invariant, and 1/alpha contributed as curves/exp factors."""
    notes = []
    curve_terms = []
    exp_terms = []
    y = SparsePoly.variable("y", VARS)
    for sol in m.solutions:
        g = sol.g.with_variables(VARS)
        C = y - g
        K = cofactor_of(field, C)
        curve_terms.append((InvariantCurve(C, K), GaussianRational(1)))
    if not m.S.is_constant:
        try:
            K_S = cofactor_of(field, m.S)
            curve_terms.append((InvariantCurve(m.S, K_S), GaussianRational(-1)))
        except Exception:
            notes.append(f"S = {m.S} is not an invariant curve; no certificate")
            return None, notes
    if m.alpha is None:
        notes.append("alpha available only as a quadrature; no certificate")
        return None, notes
    x = SparsePoly.variable("x", VARS)
    for root, e in m.alpha.factors:
        lin = x - SparsePoly.constant(root, VARS)
        try:
            K_lin = cofactor_of(field, lin)
        except Exception:
            notes.append(f"alpha factor {lin} is not invariant; no certificate")
            return None, notes
        curve_terms.append((InvariantCurve(lin, K_lin), -e))
    if not m.alpha.arg.is_zero:
        arg = m.alpha.arg
        h = (-arg.num).with_variables(VARS)
        g = arg.den.with_variables(VARS)
        if g.is_constant:
            gpoly = SparsePoly.constant(1, VARS)
            kg = SparsePoly.zero(VARS)
            L = lie_derivative(field, h)
        else:
            gpoly = g
            try:
                kg = cofactor_of(field, gpoly)
            except Exception:
                notes.append(f"alpha exp-denominator {g} is not invariant; no certificate")
                return None, notes
            L_candidate = exact_div(
                lie_derivative(field, h) - h * kg, gpoly
            )
            if L_candidate is None:
                notes.append("alpha exp part has no polynomial cofactor; no certificate")
                return None, notes
            L = L_candidate
        factor = ExpFactor(h, gpoly, 1, L, kg)
        exp_terms.append((factor, GaussianRational(1)))
    cert = DarbouxCertificate(
        tuple(curve_terms), tuple(exp_terms), INVERSE_INTEGRATING_FACTOR
    )
    ok, residual = verify_certificate(field, cert)
    if not ok:
        notes.append(f"certificate residual {residual}; rejected")
        return None, notes
    return cert, notes
