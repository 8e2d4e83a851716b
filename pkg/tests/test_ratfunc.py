import random

import pytest

from intcert.algebra import (
    RationalFunction,
    SparsePoly,
    gaussian_rational_roots,
    gq,
    log_quadrature,
    partial_fractions,
)
from intcert.errors import UnsupportedDenominator


def _x():
    return SparsePoly.variable("x")


def _rf(num, den=None):
    return RationalFunction(num, den)


def test_reduction_and_equality():
    x = _x()
    r = _rf((x ** 2 - 1), (x - 1))
    assert r.is_polynomial and r.as_polynomial() == x + 1
    assert _rf(x, x ** 2) == _rf(SparsePoly.constant(1, ("x",)), x)


def test_partial_fraction_examples():
    x = _x()
    one = SparsePoly.constant(1, ("x",))

    pf = partial_fractions(_rf(one, x ** 2 - x))
    assert pf.polynomial_part.is_zero
    assert [(str(root), mult, str(c)) for root, mult, c in pf.terms] == [
        ("0", 1, "-1"),
        ("1", 1, "1"),
    ]
    assert pf.recombine() == _rf(one, x ** 2 - x)

    pf = partial_fractions(_rf(2 * x - 1, x ** 2 - x))
    assert [(str(root), str(c)) for root, _m, c in pf.terms] == [("0", "1"), ("1", "1")]
    assert pf.recombine() == _rf(2 * x - 1, x ** 2 - x)

    pf = partial_fractions(_rf(x ** 2, x - 1))
    assert pf.polynomial_part == x + 1
    assert [(str(root), mult, str(c)) for root, mult, c in pf.terms] == [("1", 1, "1")]
    assert pf.recombine() == _rf(x ** 2, x - 1)


def test_partial_fraction_higher_multiplicity_and_complex():
    x = _x()
    one = SparsePoly.constant(1, ("x",))
    r = _rf(x + 3, (x - 1) ** 2 * x)
    assert partial_fractions(r).recombine() == r
    ri = _rf(one, x ** 2 + 1)
    pf = partial_fractions(ri)
    assert {str(root) for root, _m, _c in pf.terms} == {"i", "-i"}
    assert pf.recombine() == ri


def test_partial_fraction_unsupported():
    x = _x()
    one = SparsePoly.constant(1, ("x",))
    with pytest.raises(UnsupportedDenominator):
        partial_fractions(_rf(one, x ** 2 - 2))


def test_partial_fraction_recombination_randomized():
    rng = random.Random(11)
    x = _x()
    checked = 0
    while checked < 200:
        roots = [gq(rng.randint(-3, 3), rng.randint(-1, 1)) for _ in range(rng.randint(1, 3))]
        den = SparsePoly.constant(1, ("x",))
        for root in roots:
            den = den * (x - SparsePoly.constant(root, ("x",))) ** rng.randint(1, 2)
        num_terms = {
            (rng.randint(0, den.total_degree() + 1),): gq(rng.randint(-4, 4))
            for _ in range(rng.randint(1, 3))
        }
        num = SparsePoly(("x",), num_terms)
        if num.is_zero:
            continue
        r = _rf(num, den)
        assert partial_fractions(r).recombine() == r
        checked += 1


def test_log_quadrature_examples():
    x = _x()
    one = SparsePoly.constant(1, ("x",))

    r = _rf(-(2 * x - 1), x ** 2 - x)
    R = log_quadrature(r)
    assert R.log_derivative() == r
    assert R.as_rational() == _rf(one, x ** 2 - x)

    R = log_quadrature(_rf(one))
    assert R.as_rational() is None
    assert str(R) == "exp(x)"
    assert R.log_derivative() == _rf(one)

    r = _rf(one, x ** 2 - x)
    R = log_quadrature(r)
    assert R.log_derivative() == r
    assert R.as_rational() == _rf(x - 1, x)


def test_log_quadrature_higher_order_poles():
    x = _x()
    one = SparsePoly.constant(1, ("x",))
    r = _rf(one, x ** 2)
    R = log_quadrature(r)
    assert R.log_derivative() == r
    assert not R.arg.is_zero


def test_log_quadrature_logderivative_randomized():
    rng = random.Random(13)
    x = _x()
    checked = 0
    while checked < 100:
        den = SparsePoly.constant(1, ("x",))
        for _ in range(rng.randint(0, 2)):
            den = den * (x - rng.randint(-2, 2)) ** rng.randint(1, 2)
        num_terms = {(k,): gq(rng.randint(-3, 3)) for k in range(rng.randint(1, 3))}
        num = SparsePoly(("x",), num_terms)
        if num.is_zero:
            continue
        r = _rf(num, den)
        R = log_quadrature(r)
        assert R.log_derivative() == r
        checked += 1


def test_expintegral_float_evaluation():
    import math

    x = _x()
    one = SparsePoly.constant(1, ("x",))
    R = log_quadrature(_rf(one, x ** 2 - x))  # (x-1)/x
    assert abs(R.eval_real(2.0) - 0.5) < 1e-12
    Rexp = log_quadrature(_rf(one))
    assert abs(Rexp.eval_real(1.5) - math.exp(1.5)) < 1e-12


def test_gaussian_roots():
    x = _x()
    roots, full = gaussian_rational_roots(x ** 2 + 1, "x")
    assert full and {str(r) for r, _ in roots} == {"i", "-i"}
    roots, full = gaussian_rational_roots(x ** 2 - 2, "x")
    assert not full and roots == []
    roots, full = gaussian_rational_roots((x - 1) ** 3 * (2 * x + 1), "x")
    assert full
    assert {(str(r), m) for r, m in roots} == {("1", 3), ("-1/2", 1)}
    roots, full = gaussian_rational_roots(x ** 3, "x")
    assert full and roots[0][1] == 3
