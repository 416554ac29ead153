"""Command-line front end.

Every subcommand accepts --json for machine-readable output; identical
inputs and seed produce byte-identical JSON.  Exit codes: 0 success/pass,
1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import cmath
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .classifier import classify, family_lookup, match_family_table
from .curve_forms import CASE_SWEEPS
from .goodness import goodness_witness
from .modular_groups import invariance_report, level5_partition_check
from .qseries import (
    RESIDUAL_TOL,
    CONSTANCY_TOL,
    is_constant,
    match_constant_tag,
    mu_series,
    mu_value,
    tate_point_residual,
    theta_functional_residual,
    theta_inversion_residual,
    theta_product_ratio,
    x_diff_identity_residual,
    x_series,
    x_value,
)
from .sl2_action import Mat2, format_matrix, minimal_representative, orbit
from .torsion_coords import (
    Quad,
    QuadParseError,
    DuplicatePointError,
    format_quad,
    parse_quad,
    points_of_order_dividing,
)

DEFAULT_SEED = 17


def _round_float(x: float) -> float:
    return float(f"{x:.12g}")


def _jsonify(obj):
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, complex):
        return {"re": _round_float(obj.real), "im": _round_float(obj.imag)}
    if isinstance(obj, float):
        return _round_float(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Quad):
        return format_quad(obj)
    if isinstance(obj, Mat2):
        return format_matrix(obj)
    return obj


def _emit(payload: dict, as_json: bool):
    if as_json:
        print(json.dumps(_jsonify(payload), sort_keys=True, separators=(",", ":")))
    else:
        for key, value in payload.items():
            print(f"{key}: {_jsonify(value)}")


def _quad_arg(text: str) -> Quad:
    try:
        return parse_quad(text)
    except (QuadParseError, DuplicatePointError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _cmd_classify(args) -> tuple[int, dict]:
    if args.max_order > 16:
        print(
            f"note: max-order {args.max_order} enumerates subsets of "
            f"~{args.max_order ** 2 // 2} points per level; expect a long run",
            file=sys.stderr,
        )
    results = classify(args.max_order, prune=not args.no_prune)
    report = match_family_table(results, args.max_order)
    entries = []
    for S in results:
        entry = {
            "quad": S,
            "order": S.common_order,
            "status": "not_good",
        }
        fam = family_lookup(S, args.max_order)
        if fam is not None:
            entry["family"] = fam.label
            entry["constant"] = fam.constant
        entries.append(entry)
    payload = {
        "max_order": args.max_order,
        "count": len(results),
        "entries": entries,
        "match": "PASS" if report.passed else "FAIL",
        "missing": list(report.missing),
        "extra": list(report.extra),
    }
    return (0 if report.passed else 1), payload


def _cmd_good(args) -> tuple[int, dict]:
    witness = goodness_witness(args.quad)
    payload = {"quad": args.quad, "order": args.quad.common_order}
    if witness is None:
        payload["status"] = "not_good"
    else:
        payload["status"] = "good"
        payload["witness"] = list(witness)
    return 0, payload


def _cmd_verify(args) -> tuple[int, dict]:
    mu = mu_series(args.quad, D=args.terms)
    report = is_constant(mu, tol=args.tol)
    payload = {"quad": args.quad, "order": args.quad.common_order, "terms": args.terms}
    rng = random.Random(args.seed)
    if report.is_constant:
        payload["status"] = "constant"
        payload["constant"] = report.constant
        tag = match_constant_tag(report.constant)
        if tag is not None:
            payload["constant_tag"] = tag
        else:
            payload["warning"] = "constant does not match any table value"
    else:
        payload["status"] = "nonconstant"
        payload["first_nonconstant_exponent"] = report.first_exponent
        payload["first_nonconstant_coeff"] = report.first_coeff
    ok = True
    if args.numeric_samples > 0:
        values = []
        for _ in range(args.numeric_samples):
            radius = rng.uniform(0.05, 0.25)
            q = radius * cmath.exp(1j * rng.uniform(0, 2 * cmath.pi))
            values.append(mu_value(args.quad, q))
        spread = max(abs(a - b) for a in values for b in values)
        payload["numeric_spread"] = spread
        if report.is_constant:
            dev = max(abs(v - report.constant) for v in values)
            payload["numeric_deviation"] = dev
            ok = spread < 1e-6 and dev < 1e-6
        else:
            ok = spread > args.tol
        payload["numeric_agrees"] = ok
    return (0 if ok else 1), payload


def _cmd_theta_check(args) -> tuple[int, dict]:
    rng = random.Random(args.seed)
    pts = [p for p in points_of_order_dividing(12) if not p.is_identity]
    func_max = 0.0
    from .qseries import theta_value, unit_root

    for _ in range(args.trials):
        u = rng.choice(pts)
        q = rng.uniform(0.05, 0.5) * cmath.exp(1j * rng.uniform(0, 2 * cmath.pi))
        lhs = theta_value(u.theta, u.r + 1, q)
        rhs = -unit_root(-u.theta) * q ** float(-u.r) * theta_value(u.theta, u.r, q)
        func_max = max(func_max, abs(lhs - rhs))
    series_max = 0.0
    for _ in range(max(1, args.trials // 4)):
        u = rng.choice(pts)
        series_max = max(series_max, theta_functional_residual(u, D=6).max_abs())
        series_max = max(series_max, theta_inversion_residual(u, D=6).max_abs())
    diff_max = 0.0
    for _ in range(max(1, args.trials // 2)):
        u1, u2 = rng.sample(pts, 2)
        diff_max = max(diff_max, x_diff_identity_residual(u1, u2, D=5))
    payload = {
        "trials": args.trials,
        "functional_equation_max_residual": func_max,
        "series_functional_max_residual": series_max,
        "x_difference_max_residual": diff_max,
        "tol_functional": args.tol,
        "tol_residual": RESIDUAL_TOL,
    }
    ok = func_max < args.tol and series_max < args.tol and diff_max < RESIDUAL_TOL
    payload["status"] = "PASS" if ok else "FAIL"
    return (0 if ok else 1), payload


def _cmd_tate_check(args) -> tuple[int, dict]:
    rng = random.Random(args.seed)
    pts = [p for p in points_of_order_dividing(args.order) if not p.is_identity]
    residual_max = 0.0
    agree_max = 0.0
    for _ in range(args.trials):
        u = rng.choice(pts)
        residual_max = max(residual_max, tate_point_residual(u, D=args.terms).max_abs())
        q0 = 0.05
        agree_max = max(agree_max, abs(x_series(u, D=args.terms).evaluate(q0) - x_value(u, q0)))
    payload = {
        "order": args.order,
        "trials": args.trials,
        "terms": args.terms,
        "curve_equation_max_residual": residual_max,
        "series_vs_direct_max": agree_max,
        "tol": RESIDUAL_TOL,
    }
    ok = residual_max < RESIDUAL_TOL and agree_max < RESIDUAL_TOL
    payload["status"] = "PASS" if ok else "FAIL"
    return (0 if ok else 1), payload


def _cmd_curve_verify(args) -> tuple[int, dict]:
    cases = list(CASE_SWEEPS) if args.case == "all" else [args.case]
    payload = {"samples": args.samples, "seed": args.seed, "cases": {}}
    ok = True
    for case in cases:
        rep = CASE_SWEEPS[case](samples=args.samples, seed=args.seed)
        payload["cases"][case] = rep
        ok = ok and rep["spread"] < 1e-9
    payload["status"] = "PASS" if ok else "FAIL"
    return (0 if ok else 1), payload


def _cmd_delta(args) -> tuple[int, dict]:
    rep = invariance_report(args.quad, terms=args.terms, tol=args.tol)
    payload = {
        "quad": args.quad,
        "n": rep.n,
        "stabilizer_order_mod_pm": rep.stabilizer_order_mod_pm,
        "invariance_order_mod_pm": rep.invariance_order_mod_pm,
        "stabilizer": sorted(g.entries() for g in rep.stabilizer.elements),
        "invariance": sorted(g.entries() for g in rep.invariance.elements),
        "terms": rep.terms,
        "tol": rep.tol,
    }
    return 0, payload


def _cmd_level5(args) -> tuple[int, dict]:
    rep = level5_partition_check(terms=args.terms, tol=args.tol)
    payload = {
        "quads": list(rep.quads),
        "mu_pairwise_equal": rep.mu_pairwise_equal,
        "pairwise_disjoint": rep.pairwise_disjoint,
        "union_is_all_order_5": rep.union_is_all_order_5,
        "union_size": rep.union_size,
        "status": "PASS" if rep.passed else "FAIL",
    }
    return (0 if rep.passed else 1), payload


def _cmd_orbit(args) -> tuple[int, dict]:
    orb = sorted(orbit(args.quad))
    payload = {"quad": args.quad, "size": len(orb), "elements": orb}
    return 0, payload


def _cmd_minrep(args) -> tuple[int, dict]:
    rep, witness = minimal_representative(args.quad)
    payload = {"quad": args.quad, "minimal": rep, "witness": witness}
    return 0, payload


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torsion-quads",
        description="classify and verify projectively rigid quadruples of torsion points",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="search for non-good quadruples and match the family table")
    p.add_argument("--max-order", type=int, default=12)
    p.add_argument("--no-prune", action="store_true")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("good", help="find a separating pair (a, b) for a quadruple")
    p.add_argument("--quad", type=_quad_arg, required=True)
    p.set_defaults(func=_cmd_good)

    p = sub.add_parser("verify", help="decide constancy of the mu-series of a quadruple")
    p.add_argument("--quad", type=_quad_arg, required=True)
    p.add_argument("--terms", type=int, default=8)
    p.add_argument("--tol", type=float, default=CONSTANCY_TOL)
    p.add_argument("--numeric-samples", type=int, default=3)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("theta-check", help="theta functional equation and difference identity")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_theta_check)

    p = sub.add_parser("tate-check", help="curve-equation residuals of torsion expansions")
    p.add_argument("--order", type=int, default=12)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--terms", type=int, default=8)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_tate_check)

    p = sub.add_parser("curve-verify", help="curve-model identities over random parameters")
    p.add_argument("--case", choices=list(CASE_SWEEPS) + ["all"], default="all")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_curve_verify)

    p = sub.add_parser("delta", help="stabilizer and mu-invariance subgroup of a quadruple")
    p.add_argument("--quad", type=_quad_arg, required=True)
    p.add_argument("--terms", type=int, default=4)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=_cmd_delta)

    p = sub.add_parser("level5", help="the three mu-equivalent level-5 quadruples")
    p.add_argument("--terms", type=int, default=4)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=_cmd_level5)

    p = sub.add_parser("orbit", help="full orbit of a quadruple")
    p.add_argument("--quad", type=_quad_arg, required=True)
    p.set_defaults(func=_cmd_orbit)

    p = sub.add_parser("minrep", help="minimal representative and witness matrix")
    p.add_argument("--quad", type=_quad_arg, required=True)
    p.set_defaults(func=_cmd_minrep)

    for sp in sub.choices.values():
        sp.add_argument("--json", action="store_true", help="emit canonical JSON")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    code, payload = args.func(args)
    _emit(payload, args.json)
    return code


if __name__ == "__main__":
    sys.exit(main())
