"""Exact scalar, polynomial, rational-function, and linear algebra kernel."""

from .scalars import GaussianRational, gq, ONE, ZERO, I
from .poly import (
    SparsePoly,
    DivRem,
    poly_divrem,
    exact_div,
    divides,
    poly_gcd,
    poly_str,
)
from .linalg import LinearSolution, nullspace, solve, rref, eliminate_vector
from .roots import gaussian_rational_roots, factor_int
from .ratfunc import RationalFunction, PartialFractionDecomposition, partial_fractions
from .expintegral import SymbolicExpIntegral, log_quadrature

__all__ = [
    "GaussianRational",
    "gq",
    "ONE",
    "ZERO",
    "I",
    "SparsePoly",
    "DivRem",
    "poly_divrem",
    "exact_div",
    "divides",
    "poly_gcd",
    "poly_str",
    "LinearSolution",
    "nullspace",
    "solve",
    "rref",
    "eliminate_vector",
    "gaussian_rational_roots",
    "factor_int",
    "RationalFunction",
    "PartialFractionDecomposition",
    "partial_fractions",
    "SymbolicExpIntegral",
    "log_quadrature",
]
