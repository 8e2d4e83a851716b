from fractions import Fraction

from hypothesis import given, settings, strategies as st

from intcert.algebra import GaussianRational, gq

rationals = st.fractions(
    min_value=-20, max_value=20, max_denominator=12
)
scalars = st.builds(GaussianRational, rationals, rationals)
nonzero = scalars.filter(bool)


def test_basic_forms():
    assert str(gq(3)) == "3"
    assert str(gq("1/2")) == "1/2"
    assert str(gq(0, 1)) == "i"
    assert str(gq(1, -2)) == "1-2*i"
    assert gq("3/6") == gq("1/2")


def test_division_and_conjugate():
    z = gq(1, 2)
    assert z * z.conjugate() == gq(5)
    assert (z / z) == gq(1)
    assert (gq(1) / gq(0, 1)) == gq(0, -1)


@given(scalars, scalars, scalars)
@settings(max_examples=200)
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(nonzero)
@settings(max_examples=200)
def test_multiplicative_inverse(a):
    assert a * (GaussianRational(1) / a) == GaussianRational(1)


@given(scalars)
def test_canonical_fractions(a):
    assert a.re.denominator > 0 and a.im.denominator > 0
    assert Fraction(a.re.numerator, a.re.denominator) == a.re


def test_integer_powers():
    z = gq(0, 1)
    assert z ** 2 == gq(-1)
    assert z ** -1 == gq(0, -1)
    assert gq(2) ** -2 == gq("1/4")
