"""Command-line entry point.

JSON reports go to stdout, diagnostics to stderr.  Exit codes:
0 ran with results, 1 ran but empty/NoSolution, 2 input error,
3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .algebra import SparsePoly, poly_str
from .darboux import (
    FIRST_INTEGRAL,
    INVERSE_INTEGRATING_FACTOR,
    algebraic_iif_check,
    assemble,
    verify_certificate,
)
from .errors import (
    ExpressionSyntaxError,
    IntcertError,
    NoSolution,
    NonPolynomial,
    ResourceLimit,
    StepFailure,
)
from .invariants import (
    find_exp_factors,
    find_invariant_curves,
    find_polynomial_solutions,
)
from .painleve import painleve_first_integral, painleve_search, theorem6_classify
from .parsing import parse_polynomial, parse_rational
from .polysolve import GroebnerConfig
from .serialize import (
    certificate_from_json,
    certificate_to_json,
    expintegral_to_json,
    field_to_json,
    painleve_to_json,
    poly_to_json,
    rational_to_json,
    scalar_to_json,
    weierstrass_from_json,
)
from .validate import (
    RatAtom,
    closedness_check,
    expr_from_certificate,
    iif_to_one_form,
    numeric_drift,
)
from .vectorfield import RationalMap, VectorField, change_variables
from .weierstrass import (
    SeriesPolyY,
    TruncSeries,
    check_weierstrass_certificate,
    formal_solution,
    is_weierstrass_polynomial,
    verify_formal_invariant,
)

EXIT_OK = 0
EXIT_EMPTY = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3

COMMANDS = (
    "curves",
    "expfactors",
    "polysols",
    "darboux",
    "painleve",
    "verify",
    "weierstrass-check",
    "transform",
    "numcheck",
    "classify",
)


def _read_spec_file(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if ":" not in line:
                raise ValueError(f"bad spec line {line!r}")
            key, value = line.split(":", 1)
            out[key.strip()] = value.strip()
    return out


def _field_from_args(args) -> VectorField:
    p_text, q_text = args.P, args.Q
    if getattr(args, "spec", None):
        spec = _read_spec_file(args.spec)
        p_text = p_text or spec.get("P")
        q_text = q_text or spec.get("Q")
        for key, value in spec.items():
            if key.startswith("option."):
                name = key[len("option."):].replace("-", "_")
                if hasattr(args, name) and getattr(args, name) is None:
                    setattr(args, name, type_of_default(name, value))
    if not p_text or not q_text:
        raise NonPolynomial("both P and Q are required (flags or spec file)")
    return VectorField(parse_polynomial(p_text), parse_polynomial(q_text))


def type_of_default(name: str, value: str):
    if name in ("max_degree", "order", "deg_h", "deg_y_s", "deg_x_s", "pair_budget", "degree_budget", "max_steps"):
        return int(value)
    if name in ("rtol", "atol", "t0", "t1"):
        return float(value)
    return value


def _config_from_args(args) -> GroebnerConfig:
    """Flags override INTCERT_PAIR_BUDGET / INTCERT_DEGREE_BUDGET, which
    override the built-in defaults."""
    import os

    kwargs = {}
    env_pairs = os.environ.get("INTCERT_PAIR_BUDGET")
    env_degree = os.environ.get("INTCERT_DEGREE_BUDGET")
    if env_pairs:
        kwargs["pair_budget"] = int(env_pairs)
    if env_degree:
        kwargs["degree_budget"] = int(env_degree)
    if getattr(args, "pair_budget", None):
        kwargs["pair_budget"] = args.pair_budget
    if getattr(args, "degree_budget", None):
        kwargs["degree_budget"] = args.degree_budget
    return GroebnerConfig(**kwargs) if kwargs else GroebnerConfig()


def _emit(report: dict, started: float, code: int) -> int:
    report["timing"] = {"seconds": round(time.time() - started, 6)}
    json.dump(report, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return code


def _report_skeleton(command: str, args, field=None) -> dict:
    report = {"command": command, "schema": "report-v1", "results": {}}
    if field is not None:
        report["field"] = field_to_json(field)
    return report


# -- command handlers ------------------------------------------------------------


def _cmd_curves(args, started):
    field = _field_from_args(args)
    result = find_invariant_curves(field, args.max_degree or 1, _config_from_args(args))
    report = _report_skeleton("curves", args, field)
    report["results"] = {
        "curves": [
            {"poly": poly_to_json(c.C), "cofactor": poly_to_json(c.K)}
            for c in result.curves
        ],
        "families": [
            {
                "poly": poly_to_json(f.curve.C),
                "cofactor": poly_to_json(f.curve.K),
                "free_parameters": len(f.parameters),
            }
            for f in result.families
        ],
    }
    report["complete"] = result.complete
    code = EXIT_OK if (result.curves or result.families) else EXIT_EMPTY
    return _emit(report, started, code)


def _cmd_expfactors(args, started):
    field = _field_from_args(args)
    g = parse_polynomial(args.g) if args.g else None
    factors = find_exp_factors(field, g, args.n or 1, args.deg_h)
    report = _report_skeleton("expfactors", args, field)
    report["results"] = {
        "exp_factors": [
            {
                "h": poly_to_json(f.h),
                "g": poly_to_json(f.g),
                "n": f.n,
                "cofactor": poly_to_json(f.L),
            }
            for f in factors
        ]
    }
    report["complete"] = True
    return _emit(report, started, EXIT_OK if factors else EXIT_EMPTY)


def _cmd_polysols(args, started):
    field = _field_from_args(args)
    result = find_polynomial_solutions(field, args.max_degree or 1, _config_from_args(args))
    report = _report_skeleton("polysols", args, field)
    report["results"] = {
        "solutions": [poly_to_json(s.g) for s in result.solutions],
        "families": [
            {"poly": poly_to_json(f.representative), "free_parameters": len(f.parameters)}
            for f in result.families
        ],
    }
    report["complete"] = result.complete
    code = EXIT_OK if (result.solutions or result.families) else EXIT_EMPTY
    return _emit(report, started, code)


def _cmd_darboux(args, started):
    field = _field_from_args(args)
    config = _config_from_args(args)
    search = find_invariant_curves(field, args.max_degree or 1, config)
    objects = list(search.curves) + [f.curve for f in search.families]
    exp_factors = []
    if args.exp_deg_h is not None:
        exp_factors = find_exp_factors(field, None, 1, args.exp_deg_h)
    goal = FIRST_INTEGRAL if args.goal == "first-integral" else INVERSE_INTEGRATING_FACTOR
    report = _report_skeleton("darboux", args, field)
    report["complete"] = search.complete
    try:
        certs = assemble(field, objects, exp_factors, goal)
    except NoSolution as exc:
        report["results"] = {"certificates": [], "reason": str(exc)}
        return _emit(report, started, EXIT_EMPTY)
    report["results"] = {
        "certificates": [certificate_to_json(field, c) for c in certs]
    }
    return _emit(report, started, EXIT_OK)


def _cmd_painleve(args, started):
    field = _field_from_args(args)
    config = _config_from_args(args)
    sols = find_polynomial_solutions(field, args.max_degree or 1, config)
    chosen = sols.solutions
    if args.solutions:
        wanted = [s.strip() for s in args.solutions.split(";")]
        parsed = {poly_str(parse_polynomial(w, ("x",))) for w in wanted}
        chosen = [s for s in sols.solutions if poly_str(s.g) in parsed]
    report = _report_skeleton("painleve", args, field)
    report["results"] = {"solutions": [poly_to_json(s.g) for s in chosen]}
    report["complete"] = sols.complete
    if not chosen:
        report["results"]["factors"] = []
        return _emit(report, started, EXIT_EMPTY)
    try:
        factors = painleve_search(field, chosen, args.deg_y_s, args.deg_x_s or 0, config)
    except NoSolution as exc:
        report["results"]["factors"] = []
        report["results"]["reason"] = str(exc)
        return _emit(report, started, EXIT_EMPTY)
    report["results"]["factors"] = [painleve_to_json(field, m) for m in factors]
    integrals = []
    for m in factors:
        try:
            fi = painleve_first_integral(field, m)
        except IntcertError as exc:
            integrals.append({"error": str(exc)})
            continue
        integrals.append(
            {
                "terms": [
                    {"solution": poly_to_json(sol.g), "exponent": scalar_to_json(a)}
                    for sol, a in fi.terms
                ],
                "h": expintegral_to_json(fi.h),
                "log_h_derivative": rational_to_json(fi.log_h_derivative),
            }
        )
    report["results"]["first_integrals"] = integrals
    return _emit(report, started, EXIT_OK)


def _cmd_classify(args, started):
    field = _field_from_args(args)
    config = _config_from_args(args)
    sols = find_polynomial_solutions(field, args.max_degree or 1, config)
    chosen = sols.solutions
    if args.solutions:
        wanted = [s.strip() for s in args.solutions.split(";")]
        parsed = {poly_str(parse_polynomial(w, ("x",))) for w in wanted}
        chosen = [s for s in sols.solutions if poly_str(s.g) in parsed]
    report = _report_skeleton("classify", args, field)
    report["complete"] = sols.complete
    if not chosen:
        report["results"] = {"classification": None, "reason": "no polynomial solutions"}
        return _emit(report, started, EXIT_EMPTY)
    try:
        factors = painleve_search(field, chosen, args.deg_y_s, args.deg_x_s or 0, config)
    except NoSolution as exc:
        report["results"] = {"classification": None, "reason": str(exc)}
        return _emit(report, started, EXIT_EMPTY)
    cls = theorem6_classify(field, factors)
    results = {"classification": {"case": cls.case, "notes": list(cls.notes)}}
    if cls.fi_ratio is not None:
        results["classification"]["first_integral_ratio"] = {
            "r_difference": rational_to_json(cls.fi_ratio.r_difference),
            "s_ratio": rational_to_json(cls.fi_ratio.s_ratio),
            "verified": cls.fi_ratio.verified,
        }
    if cls.certificate is not None:
        results["certificate"] = certificate_to_json(field, cls.certificate)
    report["results"] = results
    return _emit(report, started, EXIT_OK)


def _cmd_verify(args, started):
    with open(args.cert, encoding="utf-8") as fh:
        data = json.load(fh)
    report = {"command": "verify", "schema": "report-v1", "results": {}}
    kind = data.get("kind", "darboux")
    if kind == "weierstrass":
        field, cert = weierstrass_from_json(data)
        ok, achieved = check_weierstrass_certificate(field, cert)
        report["field"] = field_to_json(field)
        report["results"] = {"valid": bool(ok), "achieved_order": achieved}
    elif kind == "painleve":
        from .painleve import waterfall_polynomials
        from .serialize import painleve_from_json
        from .vectorfield import divergence, lie_derivative

        field, factor = painleve_from_json(data)
        W = waterfall_polynomials(field, factor.solutions)
        drift = divergence(field)
        for w in W:
            drift = drift - w
        residual = factor.r.num * field.P * factor.S + factor.r.den * (
            lie_derivative(field, factor.S) + drift * factor.S
        )
        report["field"] = field_to_json(field)
        report["results"] = {
            "valid": residual.is_zero,
            "residual": poly_to_json(residual),
        }
    else:
        field, cert = certificate_from_json(data)
        ok, residual = verify_certificate(field, cert)
        report["field"] = field_to_json(field)
        report["results"] = {
            "valid": bool(ok),
            "residual": poly_to_json(residual),
        }
    return _emit(report, started, EXIT_OK if report["results"]["valid"] else EXIT_EMPTY)


def _cmd_weierstrass_check(args, started):
    if args.cert:
        return _cmd_verify(args, started)
    field = _field_from_args(args)
    order = args.order or 16
    g = formal_solution(field, order)
    y = SparsePoly.variable("y", ("x", "y"))
    C = SeriesPolyY([TruncSeries.zero(order) - g, TruncSeries.constant(1, None)])
    K = SeriesPolyY([g, TruncSeries.constant(1, None)])
    ok, achieved = verify_formal_invariant(field, C, K, order - 2)
    report = _report_skeleton("weierstrass-check", args, field)
    report["results"] = {
        "formal_solution": {
            "coeffs": [scalar_to_json(g.coefficient(k)) for k in range(order + 1)],
            "order": order,
        },
        "curve_is_weierstrass": is_weierstrass_polynomial(C),
        "invariant_with_mirror_cofactor": bool(ok),
        "achieved_order": achieved,
    }
    report["complete"] = True
    return _emit(report, started, EXIT_OK)


def _cmd_transform(args, started):
    field = _field_from_args(args)
    chart = RationalMap(
        parse_rational(args.X, ("x", "y")),
        parse_rational(args.Y, ("x", "y")),
        parse_rational(args.inv_x, ("X", "Y")),
        parse_rational(args.inv_y, ("X", "Y")),
    )
    transformed = change_variables(field, chart)
    report = _report_skeleton("transform", args, field)
    report["results"] = {
        "P": poly_to_json(transformed.P),
        "Q": poly_to_json(transformed.Q),
        "ode_text": f"dY/dX = ({poly_str(transformed.Q)})/({poly_str(transformed.P)})",
    }
    report["complete"] = True
    return _emit(report, started, EXIT_OK)


def _cmd_numcheck(args, started):
    field = _field_from_args(args)
    if args.cert:
        with open(args.cert, encoding="utf-8") as fh:
            data = json.load(fh)
        cert_field, cert = certificate_from_json(data)
        expr = expr_from_certificate(cert)
    elif args.H:
        expr = RatAtom(parse_rational(args.H, ("x", "y")))
    else:
        raise NonPolynomial("numcheck needs --H or --cert")
    start = [float(s) for s in args.start.split(",")]
    drift = numeric_drift(
        field,
        expr,
        (start[0], start[1]),
        (args.t0 or 0.0, args.t1 if args.t1 is not None else 1.0),
        rtol=args.rtol or 1e-10,
    )
    report = _report_skeleton("numcheck", args, field)
    report["results"] = {"drift": drift.to_dict()}
    report["complete"] = True
    return _emit(report, started, EXIT_OK)


def _cmd_iifcheck(args, started):
    field = _field_from_args(args)
    V = parse_rational(args.V, ("x", "y"))
    ok, residual = algebraic_iif_check(field, V.num, V.den, args.N or 1)
    form = iif_to_one_form(field, V)
    closed, _ = closedness_check(form)
    report = _report_skeleton("iifcheck", args, field)
    report["results"] = {
        "algebraic_identity": bool(ok),
        "one_form_closed": bool(closed),
        "residual": poly_to_json(residual),
    }
    report["complete"] = True
    return _emit(report, started, EXIT_OK if ok else EXIT_EMPTY)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intcert",
        description="Exact integrability certificates for planar polynomial systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, field=True):
        if field:
            p.add_argument("--P", help="polynomial for x'")
            p.add_argument("--Q", help="polynomial for y'")
            p.add_argument("--spec", help="spec file with P:, Q:, option.* lines")
        p.add_argument("--pair-budget", type=int, dest="pair_budget")
        p.add_argument("--degree-budget", type=int, dest="degree_budget")

    p = sub.add_parser("curves", help="invariant algebraic curves with cofactors")
    common(p)
    p.add_argument("--max-degree", type=int, dest="max_degree")
    p.set_defaults(handler=_cmd_curves)

    p = sub.add_parser("expfactors", help="exponential factors exp(h/g^n)")
    common(p)
    p.add_argument("--g", help="invariant curve for the denominator (default 1)")
    p.add_argument("--n", type=int)
    p.add_argument("--deg-h", type=int, dest="deg_h")
    p.set_defaults(handler=_cmd_expfactors)

    p = sub.add_parser("polysols", help="polynomial solutions y = g(x)")
    common(p)
    p.add_argument("--max-degree", type=int, dest="max_degree")
    p.set_defaults(handler=_cmd_polysols)

    p = sub.add_parser("darboux", help="assemble Darboux certificates")
    common(p)
    p.add_argument("--max-degree", type=int, dest="max_degree")
    p.add_argument("--goal", choices=("first-integral", "inverse-factor"), default="first-integral")
    p.add_argument("--exp-deg-h", type=int, dest="exp_deg_h",
                   help="include exponential factors exp(h) up to this degree")
    p.set_defaults(handler=_cmd_darboux)

    p = sub.add_parser("painleve", help="product-form integrating factors")
    common(p)
    p.add_argument("--max-degree", type=int, dest="max_degree",
                   help="degree bound for particular solutions")
    p.add_argument("--solutions", help="semicolon-separated subset, e.g. '0;1'")
    p.add_argument("--deg-y-s", type=int, dest="deg_y_s")
    p.add_argument("--deg-x-s", type=int, dest="deg_x_s")
    p.set_defaults(handler=_cmd_painleve)

    p = sub.add_parser("classify", help="two-factor vs single-factor classification")
    common(p)
    p.add_argument("--max-degree", type=int, dest="max_degree")
    p.add_argument("--solutions", help="semicolon-separated subset, e.g. '0;1'")
    p.add_argument("--deg-y-s", type=int, dest="deg_y_s")
    p.add_argument("--deg-x-s", type=int, dest="deg_x_s")
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("verify", help="re-verify a cert-v1 JSON document")
    common(p, field=False)
    p.add_argument("--cert", required=True)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("weierstrass-check", help="formal solutions and series certificates")
    common(p)
    p.add_argument("--order", type=int)
    p.add_argument("--cert", help="weierstrass cert-v1 JSON to check")
    p.set_defaults(handler=_cmd_weierstrass_check)

    p = sub.add_parser("transform", help="rational change of variables")
    common(p)
    p.add_argument("--X", required=True)
    p.add_argument("--Y", required=True)
    p.add_argument("--inv-x", required=True, dest="inv_x")
    p.add_argument("--inv-y", required=True, dest="inv_y")
    p.set_defaults(handler=_cmd_transform)

    p = sub.add_parser("numcheck", help="numeric conservation check")
    common(p)
    p.add_argument("--H", help="rational first-integral expression")
    p.add_argument("--cert", help="cert-v1 JSON whose product to evaluate")
    p.add_argument("--start", required=True, help="x0,y0")
    p.add_argument("--t0", type=float)
    p.add_argument("--t1", type=float)
    p.add_argument("--rtol", type=float)
    p.set_defaults(handler=_cmd_numcheck)

    p = sub.add_parser("iifcheck", help="algebraic inverse-integrating-factor identity")
    common(p)
    p.add_argument("--V", required=True)
    p.add_argument("--N", type=int)
    p.set_defaults(handler=_cmd_iifcheck)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.time()
    try:
        return args.handler(args, started)
    except (ExpressionSyntaxError, NonPolynomial, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except StepFailure as exc:
        print(f"integration failure: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except IntcertError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY


if __name__ == "__main__":
    sys.exit(main())
