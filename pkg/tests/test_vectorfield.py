import random

import pytest
from hypothesis import given, settings, strategies as st

from intcert.algebra import GaussianRational, RationalFunction, SparsePoly, gq
from intcert.errors import DegenerateMap, DependsOnY, NotExact
from intcert.parsing import parse_polynomial, parse_rational
from intcert.vectorfield import (
    RationalMap,
    VectorField,
    change_variables,
    divergence,
    lie_derivative,
    polynomial_potential,
    x_only_integrating_factor,
)

from test_poly import polys


def test_lie_derivative_examples(xy, one):
    x, y = xy
    field = VectorField(x, -y)
    assert lie_derivative(field, x * y).is_zero
    assert lie_derivative(field, x) == x

    field2 = VectorField(one, x + y ** 2)
    g = x ** 3 - x
    assert lie_derivative(field2, y - g) == (x + y ** 2) - (3 * x ** 2 - 1)


@given(polys(), polys())
@settings(max_examples=200, deadline=None)
def test_lie_leibniz_and_linearity(f, g):
    x = SparsePoly.variable("x", ("x", "y"))
    y = SparsePoly.variable("y", ("x", "y"))
    field = VectorField(x ** 2 - y, x * y + 1)
    assert lie_derivative(field, f * g) == f * lie_derivative(field, g) + g * lie_derivative(field, f)
    assert lie_derivative(field, f + g) == lie_derivative(field, f) + lie_derivative(field, g)


def test_divergence_examples(xy):
    x, y = xy
    assert divergence(VectorField(x, -y)).is_zero
    assert divergence(VectorField(x, y)) == 2
    assert divergence(VectorField(x ** 2 - x, y ** 2 - y)) == 2 * x + 2 * y - 2


def test_polynomial_potential(xy, one):
    x, y = xy
    h = polynomial_potential(VectorField(-x, y))
    assert h == x * y
    assert h.eval_scalar({"x": gq(0), "y": gq(0)}) == gq(0)

    with pytest.raises(NotExact):
        polynomial_potential(VectorField(x, y))

    h = polynomial_potential(VectorField(SparsePoly.zero(("x", "y")), one))
    assert h == x


def test_potential_partials_roundtrip():
    rng = random.Random(3)
    x = SparsePoly.variable("x", ("x", "y"))
    y = SparsePoly.variable("y", ("x", "y"))
    for _ in range(50):
        # build an exact field from a random potential H: P = -H_y, Q = H_x
        terms = {
            (rng.randint(0, 2), rng.randint(0, 2)): GaussianRational(rng.randint(-3, 3))
            for _ in range(3)
        }
        H = SparsePoly(("x", "y"), terms)
        H = H - SparsePoly.constant(H.eval_scalar({"x": gq(0), "y": gq(0)}), ("x", "y"))
        P, Q = -H.diff("y"), H.diff("x")
        if P.is_zero and Q.is_zero:
            continue
        field = VectorField(P, Q)
        recovered = polynomial_potential(field)
        assert recovered.diff("x") == Q and recovered.diff("y") == -P


def test_x_only_integrating_factor(xy, one):
    x, y = xy
    xf = x_only_integrating_factor(VectorField(one, x + y))
    assert xf.r == RationalFunction(SparsePoly.constant(-1, ("x",)))
    assert str(xf.R) == "exp(-x)"

    xf = x_only_integrating_factor(VectorField(x, -y))
    assert xf.r.is_zero and xf.R.is_one

    field = VectorField(y, y ** 2)
    xf = x_only_integrating_factor(field)
    assert xf.r == RationalFunction(SparsePoly.constant(-2, ("x",)))
    # closedness: d(RP)/dx + d(RQ)/dy = R (r P + P_x + Q_y) = 0
    residual = xf.r * RationalFunction(field.P) + RationalFunction(divergence(field))
    assert residual.is_zero

    with pytest.raises(DependsOnY):
        x_only_integrating_factor(VectorField(x, x * y ** 2))


def test_change_variables_abel_to_riccati(one):
    field = VectorField(one, parse_polynomial("y^3 - 2*x*y^2"))
    chart = RationalMap(
        parse_rational("x^2 - 1/y"),
        parse_rational("x"),
        parse_rational("Y", ("X", "Y")),
        parse_rational("1/(Y^2 - X)", ("X", "Y")),
    )
    ode = change_variables(field, chart)
    X = SparsePoly.variable("X", ("X", "Y"))
    Y = SparsePoly.variable("Y", ("X", "Y"))
    assert ode.P == SparsePoly.constant(1, ("X", "Y"))
    assert ode.Q == Y ** 2 - X
    assert str(ode.Q) == "Y^2 - X"


def test_change_variables_identity(xy):
    x, y = xy
    field = VectorField(x ** 2 - y, x + y)
    identity = RationalMap(
        parse_rational("x"),
        parse_rational("y"),
        parse_rational("X", ("X", "Y")),
        parse_rational("Y", ("X", "Y")),
    )
    ode = change_variables(field, identity)
    direct = RationalFunction(field.Q, field.P)
    renamed = RationalFunction(ode.Q, ode.P).subs(
        {"X": RationalFunction(x), "Y": RationalFunction(y)}
    )
    assert renamed == direct


def test_change_variables_swap_involution(xy):
    x, y = xy
    field = VectorField(x ** 2 - y, x + y)
    swap = RationalMap(
        parse_rational("y"),
        parse_rational("x"),
        parse_rational("Y", ("X", "Y")),
        parse_rational("X", ("X", "Y")),
    )
    once = change_variables(field, swap)
    # applying the swap twice returns the original reduced pair
    field_sw = VectorField(
        once.P.subs({"X": x, "Y": y}).with_variables(("x", "y")),
        once.Q.subs({"X": x, "Y": y}).with_variables(("x", "y")),
    )
    twice = change_variables(field_sw, swap)
    original = change_variables(field, RationalMap(
        parse_rational("x"), parse_rational("y"),
        parse_rational("X", ("X", "Y")), parse_rational("Y", ("X", "Y")),
    ))
    assert twice.P == original.P and twice.Q == original.Q


def test_degenerate_map(xy, one):
    x, y = xy
    field = VectorField(SparsePoly.zero(("x", "y")), one)  # x' = 0
    chart = RationalMap(
        parse_rational("x"),
        parse_rational("y"),
        parse_rational("X", ("X", "Y")),
        parse_rational("Y", ("X", "Y")),
    )
    with pytest.raises(DegenerateMap):
        change_variables(field, chart)


def test_rational_map_rejects_bad_inverse():
    with pytest.raises(ValueError):
        RationalMap(
            parse_rational("x^2"),
            parse_rational("y"),
            parse_rational("X", ("X", "Y")),
            parse_rational("Y", ("X", "Y")),
        )


def test_degree_recomputed(xy):
    x, y = xy
    field = VectorField(x, y ** 3)
    assert field.degree == 3
    assert VectorField(x, -y).degree == 1
