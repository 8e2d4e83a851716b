"""Polynomial system solving over Q(i): Buchberger bases and zero-dimensional
varieties via lex elimination, Gaussian-rational root extraction, and
level-by-level back-substitution.

Monomials are encoded so that plain tuple comparison realizes the term
order: lex uses the exponent vector itself, graded-lex prepends the total
degree.  Ideals that turn out positive-dimensional raise NotZeroDimensional
carrying enough structure for callers to present the solution family.

The solver pipeline: iterated linear presolve (degree-1 generators
eliminate unknowns), a graded-lex basis to detect inconsistency cheaply and
surface new linear relations, then a lex basis for triangular
back-substitution.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .algebra import (
    ONE,
    SparsePoly,
    gaussian_rational_roots,
    poly_gcd,
)
from .errors import NotZeroDimensional, ResourceLimit


@dataclass(frozen=True)
class GroebnerConfig:
    pair_budget: int = 200_000
    degree_budget: int = 80


DEFAULT_CONFIG = GroebnerConfig()


@dataclass(frozen=True)
class Ideal:
    """Finitely many generators plus a term order over explicit unknowns."""

    generators: tuple
    variables: tuple
    order: str = "lex"  # 'lex' | 'grlex'

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "variables", tuple(self.variables))
        if self.order not in ("lex", "grlex"):
            raise ValueError(f"unknown term order {self.order!r}")


@dataclass
class SolutionSet:
    points: list  # list[dict[str, GaussianRational]]
    complete: bool


# -- encoded-monomial arithmetic ------------------------------------------------


class _Order:
    """Encode exponent vectors so tuple comparison realizes the term order."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def encode(self, exps):
        if self.name == "lex":
            return tuple(exps)
        return (sum(exps),) + tuple(exps)

    def decode(self, mono):
        if self.name == "lex":
            return mono
        return mono[1:]

    def lcm(self, a, b):
        if self.name == "lex":
            return tuple(max(x, y) for x, y in zip(a, b))
        body = tuple(max(x, y) for x, y in zip(a[1:], b[1:]))
        return (sum(body),) + body

    def degree(self, mono) -> int:
        if self.name == "lex":
            return sum(mono)
        return mono[0]


def _mono_div(a, b):
    """a / b or None; works on encoded monomials of either order."""
    out = []
    for x, y in zip(a, b):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _to_dict(p: SparsePoly, variables, order: _Order) -> dict:
    pos = {v: i for i, v in enumerate(variables)}
    n = len(variables)
    out = {}
    for exps, c in p.terms.items():
        row = [0] * n
        for v, e in zip(p.variables, exps):
            if e:
                if v not in pos:
                    raise ValueError(f"generator uses {v!r} outside the unknown set")
                row[pos[v]] = e
        key = order.encode(row)
        prev = out.get(key)
        out[key] = c if prev is None else prev + c
    return {k: c for k, c in out.items() if c}


def _to_poly(d: dict, variables, order: _Order) -> SparsePoly:
    return SparsePoly(variables, {order.decode(m): c for m, c in d.items()})


def _sub_scaled(d1: dict, d2: dict, mono, coeff) -> dict:
    """d1 - coeff * x^mono * d2."""
    out = dict(d1)
    for e, c in d2.items():
        key = _mono_mul(e, mono)
        delta = c * coeff
        prev = out.get(key)
        if prev is None:
            out[key] = -delta
        else:
            prev = prev - delta
            if prev:
                out[key] = prev
            else:
                del out[key]
    return out


def _monic_dict(d: dict) -> dict:
    lc = d[max(d)]
    if lc == ONE:
        return d
    inv = ONE / lc
    return {e: c * inv for e, c in d.items()}


def _reduce_full(f: dict, basis_lms: list, basis: list) -> dict:
    """Complete multivariate division: no term of the result is reducible."""
    remainder = {}
    work = dict(f)
    while work:
        m = max(work)
        c = work[m]
        for lm, g in zip(basis_lms, basis):
            q = _mono_div(m, lm)
            if q is not None:
                work = _sub_scaled(work, g, q, c / g[lm])
                break
        else:
            remainder[m] = c
            del work[m]
    return remainder


def _buchberger(gens: list, order: _Order, config: GroebnerConfig) -> list:
    basis = []
    lms = []
    for g in gens:
        if g:
            g = _monic_dict(g)
            basis.append(g)
            lms.append(max(g))
    if not basis:
        return []
    heap = []
    handled = set()
    for j in range(len(basis)):
        for i in range(j):
            heapq.heappush(heap, (order.lcm(lms[i], lms[j]), i, j))
    steps = 0
    while heap:
        lcm, i, j = heapq.heappop(heap)
        handled.add((i, j))
        steps += 1
        if steps > config.pair_budget:
            raise ResourceLimit(f"Groebner pair budget {config.pair_budget} exceeded")
        lmi, lmj = lms[i], lms[j]
        if order.lcm(lmi, lmj) != lcm:
            raise AssertionError("stale pair")
        # first criterion: coprime leading monomials
        if _mono_mul(lmi, lmj) == lcm:
            continue
        # chain criterion
        skip = False
        for k in range(len(basis)):
            if k == i or k == j:
                continue
            if _mono_div(lcm, lms[k]) is not None:
                a = (min(i, k), max(i, k))
                b = (min(j, k), max(j, k))
                if a in handled and b in handled:
                    skip = True
                    break
        if skip:
            continue
        qi = _mono_div(lcm, lmi)
        qj = _mono_div(lcm, lmj)
        s = _sub_scaled(
            _sub_scaled({}, basis[i], qi, -ONE), basis[j], qj, ONE
        )
        r = _reduce_full(s, lms, basis)
        if r:
            lm = max(r)
            if order.degree(lm) > config.degree_budget:
                raise ResourceLimit(
                    f"Groebner degree budget {config.degree_budget} exceeded"
                )
            basis.append(_monic_dict(r))
            lms.append(lm)
            new = len(basis) - 1
            for k in range(new):
                heapq.heappush(heap, (order.lcm(lms[k], lm), k, new))
    return _autoreduce(basis, lms)


def _autoreduce(basis: list, lms: list) -> list:
    keep = []
    for i in range(len(basis)):
        redundant = False
        for j in range(len(basis)):
            if i == j:
                continue
            if _mono_div(lms[i], lms[j]) is not None and (lms[j] != lms[i] or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(i)
    out = []
    for idx, i in enumerate(keep):
        other_lms = [lms[j] for j in keep if j != i]
        others = [basis[j] for j in keep if j != i]
        r = _reduce_full(basis[i], other_lms, others) if others else basis[i]
        if r:
            out.append(_monic_dict(r))
    out.sort(key=max)
    return out


def groebner(ideal: Ideal, config: GroebnerConfig = DEFAULT_CONFIG) -> list:
    """Reduced Groebner basis as a SparsePoly list (deterministic order)."""
    order = _Order(ideal.order)
    gens = [_to_dict(g, ideal.variables, order) for g in ideal.generators if not g.is_zero]
    basis = _buchberger(gens, order, config)
    return [_to_poly(g, ideal.variables, order) for g in basis]


def reduce_modulo(p: SparsePoly, basis: list, variables, order: str = "lex") -> SparsePoly:
    """Normal form of p against a basis under the given order."""
    o = _Order(order)
    basis_d = [_to_dict(g, variables, o) for g in basis if not g.is_zero]
    lms = [max(g) for g in basis_d]
    return _to_poly(_reduce_full(_to_dict(p, variables, o), lms, basis_d), variables, o)


# -- linear presolve --------------------------------------------------------------


def _linear_presolve(gens: list, variables):
    """Repeatedly eliminate unknowns that occur in affine-linear generators.

    Returns (remaining generators, assignments); assignments apply in
    reverse order when lifting points.  A constant nonzero generator is
    reported via the 'inconsistent' flag.
    """
    gens = [g for g in gens if not g.is_zero]
    assignments = []
    while True:
        constant = next((g for g in gens if g.is_constant), None)
        if constant is not None:
            return gens, assignments, True
        linear = next((g for g in gens if g.total_degree() == 1), None)
        if linear is None:
            return gens, assignments, False
        lead = linear.leading_monomial()
        var_idx = next(i for i, e in enumerate(lead) if e)
        var = linear.variables[var_idx]
        coeff = linear.terms[lead]
        rest = linear - SparsePoly(linear.variables, {lead: coeff})
        expr = rest * (-(ONE / coeff))
        assignments.append((var, expr))
        new_gens = []
        for h in gens:
            if h is linear:
                continue
            h2 = h.subs({var: expr})
            if not h2.is_zero:
                new_gens.append(h2)
        gens = new_gens


def _solve_triangular(basis: list, variables: tuple, complete: bool):
    """Back-substitute through a lex Groebner basis, smallest variable first."""
    if not variables:
        return ([{}], complete) if all(g.is_zero for g in basis) else ([], complete)
    basis = [g for g in basis if not g.is_zero]
    if any(g.is_constant for g in basis):
        return [], complete
    if not basis:
        raise NotZeroDimensional("no constraints on remaining unknowns", free_vars=variables)
    var = variables[-1]
    rest = variables[:-1]
    univariate = [
        g for g in basis if all(v == var for v in g.used_variables()) and not g.is_constant
    ]
    if not univariate:
        raise NotZeroDimensional(
            f"no univariate constraint in {var}", basis=basis, free_vars=(var,)
        )
    elim = univariate[0]
    for g in univariate[1:]:
        elim = poly_gcd(elim, g)
    if elim.is_constant:
        return [], complete
    roots, fully = gaussian_rational_roots(
        elim.with_variables((var,)), var
    )
    complete = complete and fully
    points = []
    for root, _mult in roots:
        subbed = []
        consistent = True
        for g in basis:
            h = g.subs({var: root})
            if h.is_zero:
                continue
            if h.is_constant:
                consistent = False
                break
            subbed.append(h)
        if not consistent:
            continue
        sub_points, complete = _solve_triangular(subbed, rest, complete)
        for p in sub_points:
            p[var] = root
        points.extend(sub_points)
    return points, complete


def solve_zero_dim(ideal: Ideal, config: GroebnerConfig = DEFAULT_CONFIG) -> SolutionSet:
    """All Gaussian-rational points of a zero-dimensional variety.

    complete=False means some elimination factor had no Q(i) root, so
    points over larger fields may have been pruned.
    """
    variables = tuple(ideal.variables)
    gens = [g for g in ideal.generators if not g.is_zero]
    assignments = []
    vars_left = list(variables)
    base_points = None
    complete = True
    for _round in range(len(variables) + 2):
        gens, new_assignments, inconsistent = _linear_presolve(gens, vars_left)
        assignments.extend(new_assignments)
        solved = {v for v, _ in new_assignments}
        vars_left = [v for v in vars_left if v not in solved]
        if inconsistent:
            return SolutionSet([], True)
        used = set()
        for g in gens:
            used.update(g.used_variables())
        free = [v for v in vars_left if v not in used]
        if not gens:
            if free:
                raise NotZeroDimensional(
                    f"unconstrained unknowns {free}",
                    basis=(),
                    free_vars=free,
                    assignments=assignments,
                )
            base_points = [{}]
            break
        work_vars = tuple(v for v in vars_left if v in used)
        grlex_basis = groebner(Ideal(tuple(gens), work_vars, "grlex"), config)
        if any(g.is_constant for g in grlex_basis):
            return SolutionSet([], True)
        if any(g.total_degree() == 1 for g in grlex_basis):
            gens = grlex_basis
            continue
        if free:
            raise NotZeroDimensional(
                f"unconstrained unknowns {free}",
                basis=grlex_basis,
                free_vars=free,
                assignments=assignments,
            )
        lex_basis = groebner(Ideal(tuple(grlex_basis), work_vars, "lex"), config)
        if any(g.is_constant for g in lex_basis):
            return SolutionSet([], True)
        _check_zero_dimensional(lex_basis, work_vars, free, assignments)
        base_points, complete = _solve_triangular(lex_basis, work_vars, True)
        break
    else:
        raise ResourceLimit("presolve did not converge")

    points = []
    for bp in base_points:
        full = dict(bp)
        for var, expr in reversed(assignments):
            full[var] = expr.eval_scalar(full)
        points.append(full)
    # exactness check: every reported point zeroes every generator
    for p in points:
        for g in ideal.generators:
            if g.eval_scalar(p):
                raise ArithmeticError(f"reported point {p} fails generator {g}")
    points.sort(key=lambda p: tuple(p[v].sort_key() for v in variables))
    return SolutionSet(points, complete)


def _check_zero_dimensional(basis, variables, free, assignments):
    """Every variable needs a pure-power leading monomial in a lex basis."""
    order = _Order("lex")
    covered = set()
    for g in basis:
        d = _to_dict(g, variables, order)
        lm = max(d)
        nz = [i for i, e in enumerate(lm) if e]
        if len(nz) == 1:
            covered.add(variables[nz[0]])
    missing = [v for v in variables if v not in covered]
    if missing:
        raise NotZeroDimensional(
            f"positive-dimensional in {missing}",
            basis=basis,
            free_vars=tuple(missing) + tuple(free),
            assignments=assignments,
        )
