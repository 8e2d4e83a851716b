"""cert-v1 JSON interchange: certificates, fields, and search results.

All scalars serialize as exact rational string pairs ["re", "im"]; term
lists are sorted graded-lex descending, so documents are byte-deterministic
for fixed inputs.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction

from .algebra import (
    GaussianRational,
    RationalFunction,
    SparsePoly,
    SymbolicExpIntegral,
    poly_str,
)
from .darboux import DarbouxCertificate
from .errors import MalformedCertificate
from .invariants import ExpFactor, InvariantCurve
from .vectorfield import VectorField
from .weierstrass import SeriesPolyY, TruncSeries, WeierstrassCertificate

SCHEMA = "cert-v1"

VARS = ("x", "y")


def scalar_to_json(c: GaussianRational):
    return [str(c.re), str(c.im)]


def scalar_from_json(data) -> GaussianRational:
    return GaussianRational(Fraction(data[0]), Fraction(data[1]))


def poly_to_json(p: SparsePoly):
    p = p.with_variables(sorted(set(p.variables) | set(VARS)))
    terms = [
        [list(exps), scalar_to_json(c)] for exps, c in p.sorted_terms()
    ]
    return {"vars": list(p.variables), "terms": terms, "text": poly_str(p)}


def poly_from_json(data) -> SparsePoly:
    variables = tuple(data["vars"])
    terms = {
        tuple(exps): scalar_from_json(c) for exps, c in data["terms"]
    }
    return SparsePoly(variables, terms)


def rational_to_json(r: RationalFunction):
    return {"num": poly_to_json(r.num), "den": poly_to_json(r.den)}


def rational_from_json(data) -> RationalFunction:
    return RationalFunction(poly_from_json(data["num"]), poly_from_json(data["den"]))


def expintegral_to_json(R: SymbolicExpIntegral):
    return {
        "variable": R.variable,
        "arg": rational_to_json(R.arg),
        "factors": [
            {"root": scalar_to_json(root), "exponent": scalar_to_json(e)}
            for root, e in R.factors
        ],
        "text": str(R),
    }


def expintegral_from_json(data) -> SymbolicExpIntegral:
    return SymbolicExpIntegral(
        data["variable"],
        rational_from_json(data["arg"]),
        [
            (scalar_from_json(f["root"]), scalar_from_json(f["exponent"]))
            for f in data["factors"]
        ],
    )


def field_to_json(field: VectorField):
    canonical = f"P={poly_str(field.P)};Q={poly_str(field.Q)}"
    return {
        "vars": list(VARS),
        "P": poly_to_json(field.P),
        "Q": poly_to_json(field.Q),
        "fingerprint": hashlib.sha256(canonical.encode()).hexdigest(),
    }


def field_from_json(data) -> VectorField:
    return VectorField(poly_from_json(data["P"]), poly_from_json(data["Q"]))


def certificate_to_json(field: VectorField, cert: DarbouxCertificate):
    from .darboux import verify_certificate

    ok, residual = verify_certificate(field, cert)
    return {
        "schema": SCHEMA,
        "kind": "darboux",
        "field": field_to_json(field),
        "role": cert.role,
        "curve_terms": [
            {
                "poly": poly_to_json(curve.C),
                "cofactor": poly_to_json(curve.K),
                "exponent": scalar_to_json(e),
            }
            for curve, e in cert.curve_terms
        ],
        "exp_terms": [
            {
                "h": poly_to_json(f.h),
                "g": poly_to_json(f.g),
                "n": f.n,
                "cofactor": poly_to_json(f.L),
                "g_cofactor": poly_to_json(f.kg),
                "exponent": scalar_to_json(e),
            }
            for f, e in cert.exp_terms
        ],
        "residual_zero": ok,
        "text": str(cert),
    }


def certificate_from_json(data):
    if data.get("schema") != SCHEMA:
        raise MalformedCertificate(f"unknown schema {data.get('schema')!r}")
    field = field_from_json(data["field"])
    curve_terms = tuple(
        (
            InvariantCurve(poly_from_json(t["poly"]), poly_from_json(t["cofactor"])),
            scalar_from_json(t["exponent"]),
        )
        for t in data["curve_terms"]
    )
    exp_terms = tuple(
        (
            ExpFactor(
                poly_from_json(t["h"]),
                poly_from_json(t["g"]),
                int(t["n"]),
                poly_from_json(t["cofactor"]),
                poly_from_json(t["g_cofactor"]),
            ),
            scalar_from_json(t["exponent"]),
        )
        for t in data["exp_terms"]
    )
    cert = DarbouxCertificate(curve_terms, exp_terms, data["role"])
    return field, cert


def series_to_json(s: TruncSeries):
    return {
        "coeffs": [scalar_to_json(c) for c in s.coeffs],
        "order": s.order,
    }


def series_from_json(data) -> TruncSeries:
    return TruncSeries([scalar_from_json(c) for c in data["coeffs"]], data["order"])


def series_poly_to_json(p: SeriesPolyY):
    return {"ydeg": p.ydeg, "coeffs": [series_to_json(c) for c in p.coeffs]}


def series_poly_from_json(data) -> SeriesPolyY:
    return SeriesPolyY([series_from_json(c) for c in data["coeffs"]])


def weierstrass_to_json(field: VectorField, cert: WeierstrassCertificate):
    return {
        "schema": SCHEMA,
        "kind": "weierstrass",
        "field": field_to_json(field),
        "weierstrass": {
            "D": series_poly_to_json(cert.D),
            "E": series_poly_to_json(cert.E),
            "curve_terms": [
                {"poly": series_poly_to_json(C), "exponent": scalar_to_json(l)}
                for C, l in cert.curve_terms
            ],
            "order": cert.order,
        },
    }


def weierstrass_from_json(data):
    if data.get("schema") != SCHEMA:
        raise MalformedCertificate(f"unknown schema {data.get('schema')!r}")
    field = field_from_json(data["field"])
    w = data["weierstrass"]
    cert = WeierstrassCertificate(
        series_poly_from_json(w["D"]),
        series_poly_from_json(w["E"]),
        tuple(
            (series_poly_from_json(t["poly"]), scalar_from_json(t["exponent"]))
            for t in w["curve_terms"]
        ),
        int(w["order"]),
    )
    return field, cert


def painleve_to_json(field, M):
    """Embed a product-form integrating factor under the cert-v1 painleve key."""
    from .painleve import PainleveIntegratingFactor

    assert isinstance(M, PainleveIntegratingFactor)
    return {
        "schema": SCHEMA,
        "kind": "painleve",
        "field": field_to_json(field),
        "painleve": {
            "solutions": [poly_to_json(s.g) for s in M.solutions],
            "S": poly_to_json(M.S),
            "r": rational_to_json(M.r),
            "alpha": expintegral_to_json(M.alpha) if M.alpha is not None else None,
            "quadrature_only": M.quadrature_only,
        },
    }


def painleve_from_json(data):
    if data.get("schema") != SCHEMA:
        raise MalformedCertificate(f"unknown schema {data.get('schema')!r}")
    from .invariants import PolynomialSolution
    from .painleve import PainleveIntegratingFactor

    field = field_from_json(data["field"])
    section = data["painleve"]
    alpha = section.get("alpha")
    factor = PainleveIntegratingFactor(
        tuple(PolynomialSolution(poly_from_json(s)) for s in section["solutions"]),
        poly_from_json(section["S"]),
        rational_from_json(section["r"]),
        expintegral_from_json(alpha) if alpha is not None else None,
        bool(section.get("quadrature_only", False)),
    )
    return field, factor
