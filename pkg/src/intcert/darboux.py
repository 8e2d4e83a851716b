"""Darboux-type certificates: products of invariant-curve powers and
exponential factors realizing first integrals or inverse integrating factors.

The member identities and the exponent-weighted cofactor sum are exact
polynomial identities, so verification is a zero test, never a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    GaussianRational,
    SparsePoly,
    ZERO,
    exact_div,
    solve as linear_solve,
)
from .errors import NoSolution, NotInvariant, UnfactoredResidual
from .invariants import (
    InvariantCurve,
    curve_sort_key,
    find_exp_factors,
    find_invariant_curves,
    verify_invariant_curve,
)
from .vectorfield import VectorField, divergence, lie_derivative

FIRST_INTEGRAL = "first-integral"
INVERSE_INTEGRATING_FACTOR = "inverse-integrating-factor"

VARS = ("x", "y")


@dataclass(frozen=True)
class DarbouxCertificate:
    """Exponent-weighted curves and exponential factors.

    role=first-integral:            sum(l_i K_i) + sum(mu_j L_j) = 0
    role=inverse-integrating-factor: same sum equals div(field)
    """

    curve_terms: tuple  # ((InvariantCurve, GaussianRational exponent), ...)
    exp_terms: tuple    # ((ExpFactor, GaussianRational exponent), ...)
    role: str

    def __post_init__(self):
        if self.role not in (FIRST_INTEGRAL, INVERSE_INTEGRATING_FACTOR):
            raise ValueError(f"unknown role {self.role!r}")
        if not any(e for _, e in self.curve_terms) and not any(
            e for _, e in self.exp_terms
        ):
            raise ValueError("certificate needs at least one nonzero exponent")

    def cofactor_sum(self) -> SparsePoly:
        total = SparsePoly.zero(VARS)
        for curve, e in self.curve_terms:
            total = total + curve.K * e
        for factor, e in self.exp_terms:
            total = total + factor.L * e
        return total

    def scaled(self, c) -> "DarbouxCertificate":
        """Scale all exponents; only meaningful for first integrals."""
        if self.role != FIRST_INTEGRAL:
            raise ValueError("scaling is only closed on first-integral certificates")
        c = GaussianRational.of(c)
        return DarbouxCertificate(
            tuple((cur, e * c) for cur, e in self.curve_terms),
            tuple((f, e * c) for f, e in self.exp_terms),
            FIRST_INTEGRAL,
        )

    def combined_exp_argument(self):
        """The exponential part as a single D/E quotient (presentation form)."""
        from .algebra import RationalFunction

        total = RationalFunction.of(0, VARS)
        for factor, e in self.exp_terms:
            total = total + RationalFunction(factor.h * e, factor.g ** factor.n)
        return total

    def __str__(self):
        bits = []
        for curve, e in self.curve_terms:
            bits.append(f"({curve.C})^({e})")
        for factor, e in self.exp_terms:
            inner = f"({factor.h})" if factor.g.is_constant else f"({factor.h})/({factor.g})^{factor.n}"
            bits.append(f"exp({inner})^({e})")
        return " * ".join(bits) if bits else "1"


@dataclass(frozen=True)
class AlgebraicIIFCert:
    """V = (A/B)^(1/N) as an inverse integrating factor, stated polynomially."""

    A: SparsePoly
    B: SparsePoly
    N: int


def assemble(field: VectorField, curves, exp_factors, goal: str):
    """Solve the exact linear cofactor system for certificate exponents.

    Returns a list of certificates: for goal=first-integral a basis of the
    kernel; for goal=inverse-integrating-factor one particular certificate
    followed by the kernel basis as first-integral certificates.
    """
    curves = list(curves)
    exp_factors = list(exp_factors)
    cofactors = [c.K for c in curves] + [f.L for f in exp_factors]
    if not cofactors:
        raise NoSolution("no cofactored objects supplied")
    target = (
        SparsePoly.zero(VARS)
        if goal == FIRST_INTEGRAL
        else divergence(field).with_variables(VARS)
    )
    support = set(target.with_variables(VARS).terms)
    for k in cofactors:
        support.update(k.with_variables(VARS).terms)
    support = sorted(support, key=lambda e: (sum(e), e))
    rows = [
        [k.with_variables(VARS).coefficient(mono) for k in cofactors]
        for mono in support
    ]
    rhs = [target.coefficient(mono) for mono in support]
    if not rows:
        rows = [[ZERO] * len(cofactors)]
        rhs = [ZERO]
    solution = linear_solve(rows, rhs)
    kernel = [_normalize_sign(v) for v in solution.nullspace_basis]
    certificates = []
    ncurves = len(curves)

    def build(vector, role):
        curve_terms = tuple(
            (curves[i], vector[i]) for i in range(ncurves) if vector[i]
        )
        exp_terms = tuple(
            (exp_factors[j - ncurves], vector[j])
            for j in range(ncurves, len(vector))
            if vector[j]
        )
        cert = DarbouxCertificate(curve_terms, exp_terms, role)
        ok, residual = verify_certificate(field, cert)
        if not ok:
            raise ArithmeticError(f"assembled certificate fails: {residual}")
        return cert

    if goal == FIRST_INTEGRAL:
        for vec in kernel:
            certificates.append(build(vec, FIRST_INTEGRAL))
        if not certificates:
            raise NoSolution("cofactors admit no first-integral combination")
    else:
        if solution.particular is None:
            raise NoSolution("cofactors cannot reach the divergence")
        particular = _least_norm(solution.particular, kernel)
        if not any(particular):
            # div == 0: a kernel vector doubles as an inverse integrating factor
            if not kernel:
                raise NoSolution("only the trivial combination reaches the divergence")
            particular = kernel[0]
        certificates.append(build(particular, INVERSE_INTEGRATING_FACTOR))
        for vec in kernel:
            certificates.append(build(vec, FIRST_INTEGRAL))
    return certificates


def _normalize_sign(vec):
    """Flip a kernel vector so its first nonzero entry points positively."""
    for entry in vec:
        if entry:
            if entry.re < 0 or (entry.re == 0 and entry.im < 0):
                return [-x for x in vec]
            return list(vec)
    return list(vec)


def _inner(u, v) -> GaussianRational:
    total = GaussianRational(0)
    for a, b in zip(u, v):
        total = total + a * b.conjugate()
    return total


def _least_norm(particular, kernel):
    """Project the kernel component out of a particular solution.

    Makes the reported exponents canonical: the unique solution orthogonal
    to the homogeneous space.
    """
    if not kernel or not any(particular):
        return list(particular)
    gram = [[_inner(bj, bi) for bj in kernel] for bi in kernel]
    rhs = [_inner(particular, bi) for bi in kernel]
    coeffs = linear_solve(gram, rhs).particular
    out = list(particular)
    for c, b in zip(coeffs, kernel):
        out = [x - c * y for x, y in zip(out, b)]
    return out


def verify_certificate(field: VectorField, cert: DarbouxCertificate):
    """(ok, residual): member identities plus the cofactor-sum identity."""
    for curve, _ in cert.curve_terms:
        ok, residual = verify_invariant_curve(field, curve.C, curve.K)
        if not ok:
            return False, residual
    for factor, _ in cert.exp_terms:
        gn = factor.g ** factor.n
        residual = (
            lie_derivative(field, factor.h)
            - factor.h * factor.kg * factor.n
            - factor.L * gn
        )
        if not residual.is_zero:
            return False, residual
        if not factor.g.is_constant:
            ok, res_g = verify_invariant_curve(field, factor.g, factor.kg)
            if not ok:
                return False, res_g
    target = (
        SparsePoly.zero(VARS)
        if cert.role == FIRST_INTEGRAL
        else divergence(field).with_variables(VARS)
    )
    residual = cert.cofactor_sum() - target
    return residual.is_zero, residual


def algebraic_iif_check(field: VectorField, A: SparsePoly, B: SparsePoly, N: int):
    """(ok, residual) for B X(A) - A X(B) = N A B div, i.e. V = (A/B)^(1/N)."""
    if A.is_zero or B.is_zero:
        raise ValueError("A and B must be nonzero")
    if N < 1:
        raise ValueError("N must be a positive integer")
    residual = (
        B * lie_derivative(field, A)
        - A * lie_derivative(field, B)
        - A * B * divergence(field) * N
    )
    return residual.is_zero, residual


def _trial_factor(field: VectorField, poly: SparsePoly, pool: list, absorb: bool):
    """Factor poly over the curve pool by repeated exact division.

    With absorb=True, a nonconstant residual that is itself invariant joins
    the pool wholesale (still no general factorization).  Returns the
    multiplicity map or raises UnfactoredResidual.
    """
    mult = {}
    residual = poly
    while not residual.is_constant:
        progress = False
        for idx, curve in enumerate(pool):
            q = exact_div(residual, curve.C)
            if q is not None:
                mult[idx] = mult.get(idx, 0) + 1
                residual = q
                progress = True
                break
        if progress:
            continue
        if absorb:
            monic = residual.monic()
            q = exact_div(lie_derivative(field, monic), monic)
            if q is not None:
                pool.append(InvariantCurve(monic, q))
                continue
        raise UnfactoredResidual(
            f"factor {residual} is not a product of known invariant curves"
        )
    return mult, residual.constant_value()


def rational_iif_to_darboux(
    field: VectorField,
    Vnum: SparsePoly,
    Vden: SparsePoly,
    known_curves=(),
) -> DarbouxCertificate:
    """Turn a rational inverse integrating factor into a first-integral
    certificate over its invariant-curve factors.

    Trial division only: if part of V is not among the known or freshly
    found curves this raises UnfactoredResidual rather than factoring.
    """
    ok, residual = algebraic_iif_check(field, Vnum, Vden, 1)
    if not ok:
        raise NotInvariant(f"V is not an inverse integrating factor: {residual}")
    Vnum = Vnum.with_variables(VARS)
    Vden = Vden.with_variables(VARS)
    budget = max(Vnum.total_degree(), Vden.total_degree(), 1)
    pool = list(known_curves)
    seen = {str(c.C.monic()) for c in pool}
    num_mult = den_mult = None
    # deepen the curve search only while trial division stays stuck; the
    # search cannot enumerate family members, so as a last resort a residual
    # that is itself invariant is absorbed as one coarse factor
    for stage in range(1, budget + 2):
        absorb = stage == budget + 1
        if not absorb:
            search = find_invariant_curves(field, stage)
            for found in list(search.curves) + [fam.curve for fam in search.families]:
                key = str(found.C.monic())
                if key not in seen:
                    pool.append(found)
                    seen.add(key)
            pool.sort(key=curve_sort_key)
        try:
            num_mult, _ = _trial_factor(field, Vnum, pool, absorb)
            den_mult, _ = _trial_factor(field, Vden, pool, absorb)
            break
        except UnfactoredResidual:
            if absorb:
                raise
    assert num_mult is not None and den_mult is not None
    multiplicity = dict(num_mult)
    for idx, m in den_mult.items():
        multiplicity[idx] = multiplicity.get(idx, 0) - m
    used = [pool[idx] for idx in sorted(multiplicity) if multiplicity[idx]]
    exp_pool = []
    for idx in sorted(multiplicity):
        m = abs(multiplicity[idx])
        if m >= 2:
            for n in range(1, m):
                exp_pool.extend(find_exp_factors(field, pool[idx].C, n))
    certs = assemble(field, used, exp_pool, FIRST_INTEGRAL)
    return certs[0]
