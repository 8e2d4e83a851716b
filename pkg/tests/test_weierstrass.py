from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from intcert.algebra import GaussianRational, gq
from intcert.errors import MalformedCertificate, SingularAtOrigin
from intcert.vectorfield import VectorField
from intcert.weierstrass import (
    SeriesPolyY,
    TruncSeries,
    WeierstrassCertificate,
    check_weierstrass_certificate,
    formal_solution,
    is_weierstrass_polynomial,
    verify_formal_invariant,
)

coeff = st.integers(min_value=-5, max_value=5).map(lambda n: GaussianRational(n))
series = st.builds(
    lambda cs: TruncSeries(cs, 8),
    st.lists(coeff, min_size=0, max_size=6),
)


@given(series, series, series)
@settings(max_examples=200, deadline=None)
def test_series_ring_axioms(a, b, c):
    assert ((a + b) * c).truncate(8).coeffs == (a * c + b * c).truncate(8).coeffs
    assert (a * b).truncate(8).coeffs == (b * a).truncate(8).coeffs
    assert ((a * b) * c).truncate(8).coeffs == (a * (b * c)).truncate(8).coeffs


def test_series_inversion():
    s = TruncSeries([1, 1], 6)  # 1 + x
    inv = s.invert()
    assert (s * inv).coeffs == [gq(1)]
    # alternating geometric series
    assert inv.coeffs[:4] == [gq(1), gq(-1), gq(1), gq(-1)]


def test_series_division_order_loss():
    a = TruncSeries([0, 0, 1], 8)  # x^2, valuation 2
    b = TruncSeries([0, 1, 1], 8)  # x(1 + x)
    prod = a * b
    # product of val-2 and val-1 series: reliable order extends past 8
    assert prod.order == 9 or prod.order == 10


def test_exact_polynomials_embed():
    x2 = TruncSeries.x_power(2)
    assert x2.is_exact
    p = x2 * x2
    assert p.is_exact and p.coefficient(4) == gq(1)
    d = p.differentiate()
    assert d.is_exact and d.coefficient(3) == gq(4)


def test_is_weierstrass_examples(xy, one):
    x, y = xy
    assert is_weierstrass_polynomial(SeriesPolyY.from_sparse(y))
    # monic in y with a_0(0) = 0
    g = TruncSeries([0, 0, Fraction(-1, 2)], 8)
    C = SeriesPolyY([g, TruncSeries.constant(1)])
    assert is_weierstrass_polynomial(C)
    assert not is_weierstrass_polynomial(SeriesPolyY.from_sparse(y + x + 1))
    assert is_weierstrass_polynomial(SeriesPolyY.from_sparse(one))


def test_formal_solution_examples(xy, one):
    x, y = xy
    field = VectorField(one, x + y ** 2)
    g = formal_solution(field, 6)
    assert g.coefficient(2) == gq("1/2")
    assert g.coefficient(5) == gq("1/20")
    assert g.coefficient(0) == gq(0) and g.coefficient(1) == gq(0)

    assert formal_solution(VectorField(one, y), 5).is_zero
    g = formal_solution(VectorField(one, one), 3)
    assert g.coefficient(1) == gq(1) and g.coefficient(2) == gq(0)

    with pytest.raises(SingularAtOrigin):
        formal_solution(VectorField(x, -y), 4)


def test_formal_solution_recursion_oracle(xy, one):
    # independent oracle: direct coefficient recursion with Fractions for
    # g' = x + g^2, so (k+1) g_{k+1} = [x^k](x + g^2)
    x, y = xy
    order = 24
    g = [Fraction(0)] * (order + 1)
    for k in range(order):
        square = sum(g[i] * g[k - i] for i in range(k + 1))
        rhs = square + (1 if k == 1 else 0)
        g[k + 1] = Fraction(rhs, k + 1)
    built = formal_solution(VectorField(one, x + y ** 2), order)
    for k in range(order + 1):
        assert built.coefficient(k) == GaussianRational(g[k])


def test_formal_residual_vanishes_up_to_24(xy, one):
    x, y = xy
    field = VectorField(one + x, x + y + y ** 2)
    for order in (6, 12, 24):
        g = formal_solution(field, order)
        P = SeriesPolyY.from_sparse(field.P)
        Q = SeriesPolyY.from_sparse(field.Q)
        residual = P.subs_y(g) * g.differentiate() - Q.subs_y(g)
        v = residual.valuation()
        assert residual.is_zero or v >= order


def test_verify_formal_invariant(xy, one):
    x, y = xy
    field = VectorField(one, x + y ** 2)
    g = formal_solution(field, 14)
    C = SeriesPolyY([TruncSeries.zero(14) - g, TruncSeries.constant(1)])
    K = SeriesPolyY([g, TruncSeries.constant(1)])
    ok, achieved = verify_formal_invariant(field, C, K, 12)
    assert ok and achieved >= 12
    assert is_weierstrass_polynomial(C)

    field2 = VectorField(x, -y)
    Cy = SeriesPolyY.from_sparse(y)
    ok, achieved = verify_formal_invariant(
        field2, Cy, SeriesPolyY.from_sparse(-one), 10
    )
    assert ok and achieved == 10
    ok, achieved = verify_formal_invariant(field2, Cy, SeriesPolyY.from_sparse(one), 10)
    assert not ok and achieved == 0


def test_certificate_full_order(xy, one):
    x, y = xy
    field = VectorField(one, y)
    cert = WeierstrassCertificate(
        SeriesPolyY.zero(),
        SeriesPolyY.from_sparse(one),
        ((SeriesPolyY.from_sparse(y), gq(1)),),
        12,
    )
    ok, achieved = check_weierstrass_certificate(field, cert)
    assert ok and achieved == 12


def test_certificate_formal_curve(xy, one):
    x, y = xy
    field = VectorField(one, x + y ** 2)
    g = formal_solution(field, 16)
    C = SeriesPolyY([TruncSeries.zero(16) - g, TruncSeries.constant(1)])
    # V = (y - g)^2 compensating exp part exists; here check the raw curve
    # term identity contributes the right residual order bookkeeping
    cert = WeierstrassCertificate(
        SeriesPolyY.zero(),
        SeriesPolyY.from_sparse(one),
        ((C, gq(2)),),
        12,
    )
    ok, achieved = check_weierstrass_certificate(field, cert)
    # 2 X(C)/C = div fails for this field, so the verdict is honest False
    assert not ok


def test_certificate_malformed(xy, one):
    x, y = xy
    field = VectorField(one, y)
    with pytest.raises(MalformedCertificate):
        check_weierstrass_certificate(
            field,
            WeierstrassCertificate(
                SeriesPolyY.zero(),
                SeriesPolyY.from_sparse(one),
                ((SeriesPolyY.from_sparse(y + 1), gq(1)),),
                8,
            ),
        )


def test_exact_identities_embed_in_series(xy):
    x, y = xy
    field = VectorField(x ** 2 - x, y ** 2 - y)
    # X(x - y) = (x + y - 1)(x - y) exactly; re-check as series mod x^20
    C = SeriesPolyY.from_sparse(x - y)
    K = SeriesPolyY.from_sparse(x + y - 1)
    ok, achieved = verify_formal_invariant(field, C, K, 20)
    assert ok and achieved == 20
