import random

import pytest

from intcert.algebra import SparsePoly, gq
from intcert.darboux import (
    FIRST_INTEGRAL,
    INVERSE_INTEGRATING_FACTOR,
    DarbouxCertificate,
    algebraic_iif_check,
    assemble,
    rational_iif_to_darboux,
    verify_certificate,
)
from intcert.errors import NoSolution
from intcert.invariants import InvariantCurve, find_invariant_curves
from intcert.vectorfield import VectorField


def test_assemble_first_integral(xy, one):
    x, y = xy
    field = VectorField(x, -y)
    curves = find_invariant_curves(field, 1).curves
    certs = assemble(field, curves, [], FIRST_INTEGRAL)
    assert len(certs) == 1
    cert = certs[0]
    exps = {str(cur.C): e for cur, e in cert.curve_terms}
    assert exps["x"] == exps["y"] == gq(1)
    ok, residual = verify_certificate(field, cert)
    assert ok and residual.is_zero


def test_assemble_iif_simple(xy, one):
    x, y = xy
    field = VectorField(x, y)
    curves = [InvariantCurve(x, one), InvariantCurve(y, one)]
    certs = assemble(field, curves, [], INVERSE_INTEGRATING_FACTOR)
    cert = certs[0]
    assert cert.role == INVERSE_INTEGRATING_FACTOR
    exps = {str(cur.C): e for cur, e in cert.curve_terms}
    assert exps == {"x": gq(1), "y": gq(1)}


def test_assemble_iif_separable(xy):
    x, y = xy
    field = VectorField(x ** 2 - x, y ** 2 - y)
    curves = [c for c in find_invariant_curves(field, 1).curves if str(c.C) != "x - y"]
    certs = assemble(field, curves, [], INVERSE_INTEGRATING_FACTOR)
    cert = certs[0]
    exps = {str(cur.C): e for cur, e in cert.curve_terms}
    assert exps == {"x": gq(1), "x - 1": gq(1), "y": gq(1), "y - 1": gq(1)}
    ok, _ = verify_certificate(field, cert)
    assert ok


def test_assemble_no_solution(xy, one):
    x, y = xy
    field = VectorField(x, y)
    with pytest.raises(NoSolution):
        assemble(field, [InvariantCurve(x, one)], [], FIRST_INTEGRAL)


def test_verify_detects_wrong_exponents(xy, one):
    x, y = xy
    field = VectorField(x, -y)
    curves = find_invariant_curves(field, 1).curves
    by_name = {str(c.C): c for c in curves}
    bad = DarbouxCertificate(
        ((by_name["x"], gq(1)), (by_name["y"], gq(2))), (), FIRST_INTEGRAL
    )
    ok, residual = verify_certificate(field, bad)
    assert not ok
    assert residual == -one


def test_algebraic_iif_check_examples(xy, one):
    x, y = xy
    ok, _ = algebraic_iif_check(VectorField(x, y), x * y, one, 1)
    assert ok
    ok, _ = algebraic_iif_check(VectorField(-y, x), x ** 2 + y ** 2, one, 2)
    assert ok
    ok, residual = algebraic_iif_check(VectorField(x, y), x, y, 1)
    assert not ok
    assert residual == -2 * x * y


def test_rational_iif_examples(xy, one):
    x, y = xy
    field = VectorField(x, y)
    cert = rational_iif_to_darboux(field, x * y, one)
    exps = {str(cur.C): e for cur, e in cert.curve_terms}
    assert exps == {"x": gq(1), "y": gq(-1)}
    ok, _ = verify_certificate(field, cert)
    assert ok

    field2 = VectorField(x ** 2 - x, y ** 2 - y)
    cert2 = rational_iif_to_darboux(field2, (x ** 2 - x) * (y ** 2 - y), one)
    ok, _ = verify_certificate(field2, cert2)
    assert ok
    exps2 = {str(cur.C): e for cur, e in cert2.curve_terms}
    assert set(exps2) == {"x", "x - 1", "y", "y - 1"}
    # the classical gauge H = x(y-1)/((x-1)y) lies in the kernel family:
    # exponents (1, -1, -1, 1) must satisfy the same cofactor identity
    gauge = DarbouxCertificate(
        tuple(
            (cur, {"x": gq(1), "x - 1": gq(-1), "y": gq(-1), "y - 1": gq(1)}[str(cur.C)])
            for cur, _ in cert2.curve_terms
        ),
        (),
        FIRST_INTEGRAL,
    )
    ok, _ = verify_certificate(field2, gauge)
    assert ok

    cert3 = rational_iif_to_darboux(field, x ** 2 + x * y, one)
    names = {str(cur.C) for cur, _ in cert3.curve_terms}
    assert names <= {"x", "x + y"}
    ok, _ = verify_certificate(field, cert3)
    assert ok


def test_rational_iif_with_repeated_factor(xy, one):
    x, y = xy
    field = VectorField(x, y)
    cert = rational_iif_to_darboux(field, x ** 2, one)
    ok, _ = verify_certificate(field, cert)
    assert ok
    assert cert.exp_terms  # needs exp(y/x) or similar, curves alone cannot do it


def test_rational_iif_unfactored(xy, one):
    x, y = xy
    field = VectorField(x, y)
    # V = x^2 + y is an IIF? X(V) = 2x^2 + y vs V*div = 2x^2 + 2y: not an IIF.
    from intcert.errors import NotInvariant

    with pytest.raises(NotInvariant):
        rational_iif_to_darboux(field, x ** 2 + y, one)


def test_fi_scaling_property(xy):
    x, y = xy
    field = VectorField(x, -y)
    cert = assemble(field, find_invariant_curves(field, 1).curves, [], FIRST_INTEGRAL)[0]
    for c in (gq(2), gq("1/3"), gq(0, 1), gq(-5)):
        ok, _ = verify_certificate(field, cert.scaled(c))
        assert ok


def test_two_iif_difference_is_fi():
    rng = random.Random(31)
    x = SparsePoly.variable("x", ("x", "y"))
    y = SparsePoly.variable("y", ("x", "y"))
    checked = 0
    while checked < 200:
        a1, a2 = rng.randint(-3, 3), rng.randint(-3, 3)
        b1, b2 = rng.randint(-3, 3), rng.randint(-3, 3)
        if a1 == a2 or b1 == b2:
            continue
        field = VectorField((x - a1) * (x - a2), (y - b1) * (y - b2))
        curves = [
            InvariantCurve(x - a1, x - a2),
            InvariantCurve(x - a2, x - a1),
            InvariantCurve(y - b1, y - b2),
            InvariantCurve(y - b2, y - b1),
        ]
        certs = assemble(field, curves, [], INVERSE_INTEGRATING_FACTOR)
        iif = certs[0]
        kernel_fis = certs[1:]
        assert kernel_fis
        # a second IIF: shift the particular by a kernel vector
        shift = {str(cur.C): e for cur, e in kernel_fis[0].curve_terms}
        base = {str(cur.C): e for cur, e in iif.curve_terms}
        curves_by_name = {str(c.C): c for c in curves}
        second = DarbouxCertificate(
            tuple(
                (curves_by_name[name], base.get(name, gq(0)) + shift.get(name, gq(0)))
                for name in curves_by_name
                if base.get(name, gq(0)) + shift.get(name, gq(0))
            ),
            (),
            INVERSE_INTEGRATING_FACTOR,
        )
        ok, _ = verify_certificate(field, second)
        assert ok
        # difference of the two IIF exponent vectors verifies as a first integral
        diff_terms = tuple(
            (curves_by_name[name], shift[name]) for name in shift if shift[name]
        )
        difference = DarbouxCertificate(diff_terms, (), FIRST_INTEGRAL)
        ok, _ = verify_certificate(field, difference)
        assert ok
        checked += 1


def test_combined_exp_argument(xy, one):
    x, y = xy
    field = VectorField(one, x + y)
    from intcert.invariants import find_exp_factors

    factors = find_exp_factors(field, None, 1, 1)
    curves = find_invariant_curves(field, 1).curves
    certs = assemble(field, curves, factors, FIRST_INTEGRAL)
    cert = certs[0]
    arg = cert.combined_exp_argument()
    assert not arg.is_zero
