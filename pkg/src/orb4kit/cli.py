"""Command line front end.

Every command prints one report, as sorted-key JSON with ``--json`` or as
``key = value`` lines otherwise. Exit codes: 0 success or verification
passed, 1 verification failed, 2 invalid input.

Flag grammar:
  --weights / --action   comma separated integers, e.g. ``1,2,4``
  --p / --q              complex vectors, ``re,im`` per coordinate joined by
                         semicolons, e.g. ``1,0;0,0;0,0``
  --table / --homology   comma separated groups, e.g. ``Z,0,Z_5,0,Z``
"""

from __future__ import annotations

import argparse
import json
import sys
from math import gcd, pi
from typing import Optional, Sequence

import numpy as np

from . import algebra, hitchin, quotgeo, wps

SCHEMA = "orb4kit/1"


class InputError(ValueError):
    pass


def _int_list(n: Optional[int] = None):
    def parse(text: str) -> tuple[int, ...]:
        try:
            values = tuple(int(x) for x in text.split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")
        if n is not None and len(values) != n:
            raise argparse.ArgumentTypeError(f"expected {n} integers, got {text!r}")
        return values

    return parse


def _complex_vector(text: str) -> np.ndarray:
    try:
        coords = []
        for part in text.split(";"):
            re_, im = (float(x) for x in part.split(","))
            coords.append(complex(re_, im))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected 're,im;re,im;...' complex coordinates, got {text!r}"
        )
    return np.array(coords)


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _order_or_inf(text: str) -> Optional[int]:
    if text.lower() in ("inf", "infinite"):
        return None
    return _positive_int(text)


def _table(text: str) -> algebra.GradedGroup:
    try:
        return algebra.GradedGroup.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _plain(obj):
    """Recursively convert numpy values into JSON-native Python values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _verification(passed: bool, max_violation: float, trials: int, seed: int) -> dict:
    return {
        "passed": bool(passed),
        "max_violation": float(max_violation),
        "trials": int(trials),
        "seed": int(seed),
    }


def _weights(args) -> wps.WeightTriple:
    return wps.make_weights(*args.weights)


# wps ---------------------------------------------------------------------


def cmd_wps_info(args):
    lam = _weights(args)
    product = wps.is_product_form(lam)
    coh = wps.wps_cohomology(lam)
    results = {
        "space": str(lam),
        "strata": {s.name: s.group_order for s in wps.stratification(lam)},
        "product_form": list(product) if product else None,
        "underlying_is_cp2": product is not None,
        "cohomology": coh.to_json(),
        "euler_characteristic": algebra.euler_characteristic(coh),
        "pi1orb_order": 1,
    }
    return {"weights": list(lam)}, results, None


def cmd_wps_fixed(args):
    lam = _weights(args)
    fixed = wps.fixed_point_set(lam, args.action)
    isotropy = {}
    for i in fixed.isolated_vertices:
        try:
            isotropy[f"vertex{i}"] = list(wps.isotropy_weights(lam, args.action, i))
        except ValueError:
            isotropy[f"vertex{i}"] = None
    results = dict(fixed.to_json(), isotropy=isotropy)
    return {"weights": list(lam), "action": list(args.action)}, results, None


def cmd_wps_isotropy(args):
    lam = _weights(args)
    raw = wps.raw_isotropy(lam, args.action, args.vertex)
    rep = wps.isotropy_weights(lam, args.action, args.vertex)
    inputs = {"weights": list(lam), "action": list(args.action), "vertex": args.vertex}
    return inputs, {"raw": list(raw), "phi": [rep.k, rep.l]}, None


def cmd_wps_distance(args):
    lam = _weights(args)
    p, q = args.p, args.q
    if args.normalize:
        p, q = p / np.linalg.norm(p), q / np.linalg.norm(q)
    d = wps.wps_distance(lam, p, q, args.tol)
    inputs = {"weights": list(lam), "p": p, "q": q, "tol": args.tol}
    return inputs, {"distance": d}, None


def cmd_wps_toponogov(args):
    lam = _weights(args)
    action = args.action or wps.default_generic_action(lam)
    w = wps.toponogov_witness(lam, action, args.tol)
    inputs = {"weights": list(lam), "action": list(action), "tol": args.tol, "min_sum": args.min_sum}
    violation = args.min_sum - w.angle_sum
    passed = w.angle_sum > args.min_sum - args.tol
    return inputs, w.to_json(), _verification(passed, violation, 1, 0)


def _random_config(rng: np.random.Generator, max_entry: int):
    while True:
        lam = tuple(int(x) for x in rng.integers(1, max_entry + 1, 3))
        if gcd(gcd(*lam[:2]), lam[2]) != 1:
            continue
        m = tuple(int(x) for x in rng.integers(-max_entry, max_entry + 1, 3))
        weights = wps.make_weights(*lam)
        if not wps.is_trivial_action(weights, m):
            return weights, m


def cmd_wps_kobayashi(args):
    if args.weights is not None:
        if args.action is None:
            raise InputError("--action is required together with --weights")
        lam = _weights(args)
        fixed = wps.fixed_point_set(lam, args.action)
        ok = wps.kobayashi_check(lam, args.action)
        inputs = {"weights": list(lam), "action": list(args.action)}
        results = {
            "fixed_set": fixed.kind,
            "euler_fixed": fixed.euler_characteristic,
            "euler_space": algebra.euler_characteristic(wps.wps_cohomology(lam)),
        }
        return inputs, results, _verification(ok, 0.0 if ok else 1.0, 1, args.seed)
    failures = []
    for i in range(args.trials):
        lam, m = _random_config(np.random.default_rng([args.seed, i]), args.max_entry)
        if not wps.kobayashi_check(lam, m):
            failures.append({"weights": list(lam), "action": list(m)})
    inputs = {"trials": args.trials, "seed": args.seed, "max_entry": args.max_entry}
    results = {"failures": failures}
    return inputs, results, _verification(not failures, len(failures), args.trials, args.seed)


# cohomology --------------------------------------------------------------


def cmd_cohomology_lens(args):
    homology, cohomology = algebra.lens_suspension_tables(args.p, args.q)
    uct = algebra.universal_coefficients_cohomology(homology)
    defect = algebra.integer_duality_defect(cohomology, homology)
    ok, why = algebra.validate_theorem_top_profile(cohomology, 2, args.p)
    results = {
        "homology": homology.to_json(),
        "cohomology": cohomology.to_json(),
        "uct_cohomology": uct.to_json(),
        "uct_matches": uct == cohomology,
        "euler_characteristic": algebra.euler_characteristic(homology),
        "pi1orb_order": args.p,
        "rational_duality": algebra.rational_duality_check(homology),
        "integer_duality_defect": {str(k): str(g) for k, g in defect.defect.items()},
        "theorem_profile": {"ok": ok, "diagnostic": why},
    }
    return {"p": args.p, "q": args.q}, results, None


def cmd_cohomology_validate_top(args):
    if (args.table is None) == (args.lens is None):
        raise InputError("give exactly one of --table or --lens")
    table = args.table if args.table is not None else algebra.lens_suspension_tables(args.lens)[1]
    n = args.n if args.n is not None else algebra.euler_characteristic(table)
    ok, why = algebra.validate_theorem_top_profile(table, n, args.pi1orb)
    inputs = {
        "cohomology": table.to_json(),
        "n": n,
        "pi1orb_order": "inf" if args.pi1orb is None else args.pi1orb,
    }
    return inputs, {"valid": ok, "diagnostic": why}, _verification(ok, 0.0 if ok else 1.0, 1, 0)


def cmd_cohomology_duality(args):
    homology = args.homology
    cohomology = args.cohomology or algebra.universal_coefficients_cohomology(homology)
    rational = algebra.rational_duality_check(homology)
    defect = algebra.integer_duality_defect(cohomology, homology)
    inputs = {"homology": homology.to_json(), "cohomology": cohomology.to_json()}
    results = {
        "rational_duality": rational,
        "integer_duality_defect": {str(k): str(g) for k, g in defect.defect.items()},
        "integer_duality": defect.is_trivial and not defect.rank_mismatch,
        "rank_mismatch_degrees": list(defect.rank_mismatch),
    }
    return inputs, results, _verification(rational, 0.0 if rational else 1.0, 1, 0)


# verify ------------------------------------------------------------------


def cmd_verify_angle_sum(args):
    model = quotgeo.QuotientModel(args.k, args.l, args.gamma_order, args.gamma_exponents)
    report = quotgeo.verify_perimeter_bound(model, args.trials, args.seed, args.tol, args.bound)
    inputs = {
        "k": args.k,
        "l": args.l,
        "gamma_order": args.gamma_order,
        "gamma_exponents": list(args.gamma_exponents),
        "trials": args.trials,
        "seed": args.seed,
        "tol": args.tol,
        "bound": args.bound,
    }
    verification = _verification(report.passed, report.max_violation, args.trials, args.seed)
    return inputs, report.to_json(), verification


# hitchin -----------------------------------------------------------------


def cmd_hitchin_fixed_points(args):
    tag = hitchin.HitchinOrbifoldTag(args.k, args.side)
    report = hitchin.verify_fixed_points(args.trials, args.seed, args.tol)
    results = dict(report.to_json(), orbifold=tag.to_json(), singular_orbit=tag.representative())
    inputs = {"k": args.k, "side": args.side, "trials": args.trials, "seed": args.seed, "tol": args.tol}
    return inputs, results, _verification(report.passed, report.max_violation, args.trials, args.seed)


def cmd_hitchin_slice_range(args):
    r = hitchin.singular_slice_range(args.tol, args.samples, args.seed, args.sample_tol)
    inputs = {"tol": args.tol, "samples": args.samples, "seed": args.seed, "sample_tol": args.sample_tol}
    violation = max(r.analytic_error - r.tol, r.rayleigh_violation - r.tol, r.sampled_error - r.sample_tol)
    return inputs, r.to_json(), _verification(r.passed, violation, args.samples, args.seed)


def cmd_hitchin_slice_orbit(args):
    r = hitchin.slice_orbit_uniqueness(args.h, args.samples, args.tol, args.seed)
    inputs = {"h": args.h, "samples": args.samples, "tol": args.tol, "seed": args.seed}
    return inputs, r.to_json(), _verification(r.passed, r.max_violation, r.trials, r.seed)


def cmd_hitchin_verify_phi12(args):
    r = hitchin.verify_phi12(args.samples, args.tol, args.seed)
    inputs = {"samples": args.samples, "tol": args.tol, "seed": args.seed}
    return inputs, r.to_json(), _verification(r.passed, r.max_violation, r.trials, r.seed)


# plumbing ----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="orb4kit",
        description="Invariants of 4-orbifolds and numerical checks of their metric lemmas.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__.split("\n\n", 2)[2],
    )
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def command(group, name, func, help_):
        p = group.add_parser(name, help=help_)
        p.set_defaults(func=func, command=name)
        p.add_argument("--json", action="store_true", help="print the report as JSON")
        return p

    w = groups.add_parser("wps", help="weighted projective planes").add_subparsers(
        dest="sub", required=True, parser_class=_Parser
    )
    triple = _int_list(3)

    p = command(w, "info", cmd_wps_info, "strata, product form and cohomology")
    p.add_argument("--weights", type=triple, required=True)

    p = command(w, "fixed", cmd_wps_fixed, "fixed set of a circle action")
    p.add_argument("--weights", type=triple, required=True)
    p.add_argument("--action", type=triple, required=True)

    p = command(w, "isotropy", cmd_wps_isotropy, "isotropy weights at a fixed vertex")
    p.add_argument("--weights", type=triple, required=True)
    p.add_argument("--action", type=triple, required=True)
    p.add_argument("--vertex", type=int, choices=(0, 1, 2), required=True)

    p = command(w, "distance", cmd_wps_distance, "quotient distance on S^5/S^1")
    p.add_argument("--weights", type=triple, required=True)
    p.add_argument("--p", type=_complex_vector, required=True)
    p.add_argument("--q", type=_complex_vector, required=True)
    p.add_argument("--tol", type=_positive_float, default=1e-6)
    p.add_argument("--normalize", action="store_true", help="rescale p and q to unit length")

    p = command(w, "toponogov", cmd_wps_toponogov, "comparison angles at three fixed points")
    p.add_argument("--weights", type=triple, required=True)
    p.add_argument("--action", type=triple, help="defaults to the smallest generic action")
    p.add_argument("--tol", type=_positive_float, default=1e-6)
    p.add_argument("--min-sum", type=float, default=pi, help="required angle sum (default pi)")

    p = command(w, "kobayashi", cmd_wps_kobayashi, "Euler characteristic of fixed set vs space")
    p.add_argument("--weights", type=triple)
    p.add_argument("--action", type=triple)
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-entry", type=_positive_int, default=20)

    c = groups.add_parser("cohomology", help="graded groups").add_subparsers(
        dest="sub", required=True, parser_class=_Parser
    )
    p = command(c, "lens", cmd_cohomology_lens, "suspended lens space tables")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, default=1)

    p = command(c, "validate-top", cmd_cohomology_validate_top, "check a cohomology profile")
    p.add_argument("--table", type=_table)
    p.add_argument("--lens", type=int, help="use the suspended lens space table for this p")
    p.add_argument("--n", type=int, help="Euler characteristic (default: from the table)")
    p.add_argument("--pi1orb", type=_order_or_inf, default=1, help="order of pi1orb or 'inf'")

    p = command(c, "duality", cmd_cohomology_duality, "rational and integral duality")
    p.add_argument("--homology", type=_table, required=True)
    p.add_argument("--cohomology", type=_table, help="default: universal coefficients")

    v = groups.add_parser("verify", help="numerical lemma checks").add_subparsers(
        dest="sub", required=True, parser_class=_Parser
    )
    p = command(v, "angle-sum", cmd_verify_angle_sum, "perimeter bound on X_kl / Gamma")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--gamma-order", type=_positive_int, default=1)
    p.add_argument("--gamma-exponents", type=_int_list(2), default=(1, 1))
    p.add_argument("--trials", type=_positive_int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=_positive_float, default=1e-6)
    p.add_argument("--bound", type=float, default=pi, help="perimeter bound (default pi)")

    h = groups.add_parser("hitchin", help="matrix model of S^4").add_subparsers(
        dest="sub", required=True, parser_class=_Parser
    )
    p = command(h, "fixed-points", cmd_hitchin_fixed_points, "circle-fixed matrices")
    p.add_argument("--k", type=_positive_int, default=1, help="order of the orbifold group")
    p.add_argument("--side", choices=("positive", "negative"), default="positive")
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=_positive_float, default=1e-12)

    p = command(h, "slice-range", cmd_hitchin_slice_range, "h-range of the singular orbit")
    p.add_argument("--tol", type=_positive_float, default=1e-9)
    p.add_argument("--samples", type=_positive_int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sample-tol", type=_positive_float, default=1e-3)

    p = command(h, "slice-orbit", cmd_hitchin_slice_orbit, "one circle orbit per slice")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--samples", type=_positive_int, default=200)
    p.add_argument("--tol", type=_positive_float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)

    p = command(h, "verify-phi12", cmd_hitchin_verify_phi12, "weights of the circle action")
    p.add_argument("--samples", type=_positive_int, default=1000)
    p.add_argument("--tol", type=_positive_float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _flatten(prefix: str, value, out: list[str]) -> None:
    if isinstance(value, dict) and value:
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else k, value[k], out)
    else:
        out.append(f"{prefix} = {json.dumps(value)}")


def render(report: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(report, sort_keys=True)
    lines: list[str] = []
    _flatten("", report, lines)
    return "\n".join(lines)


def run(argv: Sequence[str], stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        inputs, results, verification = args.func(args)
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    except ValueError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    report = {
        "schema": SCHEMA,
        "command": f"{args.group} {args.sub}",
        "inputs": _plain(inputs),
        "results": _plain(results),
        "verification": _plain(verification),
    }
    print(render(report, args.json), file=stdout)
    if verification is not None and not verification["passed"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
