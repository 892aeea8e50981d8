"""Command-line front end: reproducible checks with machine-readable reports.

Every subcommand emits a JSON (or CSV) report whose canonical part is
byte-identical across runs with equal flags; wall-clock timing lives in a
separate non-canonical "timing" section.  Exit codes: 0 all checks passed
and any --expect-dim matched, 1 check failure or expectation mismatch,
2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .algebra import AlgebraSpec, TAG_L, Window, jacobi_check, worker_count
from .halfderiv import (
    ShiftSolver,
    identity_candidate,
    interior_dimension,
    shift_sweep,
    thm_f_family,
    thm_h_family,
    torus_generic_family,
    verify_candidate,
)
from .scalars import parse_scalar, scalar_to_str
from .tpa import (
    ProductTable,
    rank_one_center_product,
    thmG_check,
    triviality_probe,
    verify_axioms,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2


class ConfigError(Exception):
    pass


def _parse_degree(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(",")
        return (int(a), int(b))
    except Exception:
        raise ConfigError(f"expected a degree like '3,0', got {text!r}")


def _build_spec(args) -> AlgebraSpec:
    try:
        if args.algebra in ("virasoro-root", "torus-root"):
            if args.t is None:
                raise ConfigError("--t is required for root-of-unity variants")
            return AlgebraSpec.from_json({"variant": args.algebra, "t": args.t})
        return AlgebraSpec.from_json({"variant": args.algebra, "q": args.q})
    except (ValueError, ConfigError) as exc:
        raise ConfigError(str(exc))


def _config_echo(args, fields) -> dict:
    cfg = {"algebra": args.algebra}
    if args.algebra.endswith("root"):
        cfg["t"] = args.t
    else:
        cfg["q"] = args.q
    for f in fields:
        cfg[f] = getattr(args, f.replace("-", "_"))
    return cfg


def _finish(report: dict, args, started: float) -> dict:
    report["toolVersion"] = __version__
    report["timing"] = {"wallClockMs": round((time.monotonic() - started) * 1000, 3)}
    return report


def canonical_json(report: dict) -> str:
    canonical = {k: v for k, v in report.items() if k != "timing"}
    return json.dumps(canonical, sort_keys=True, indent=2) + "\n"


def _emit(report: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        text = _to_csv(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _to_csv(report: dict) -> str:
    lines = []
    results = report.get("results", {})
    if "dimensions" in results:
        lines.append("shift1,shift2,fullDim,interiorDim")
        for row in results["dimensions"]:
            s = row["shift"]
            lines.append(f"{s[0]},{s[1]},{row['fullDim']},{row['interiorDim']}")
    elif "perShift" in results:
        lines.append("shift1,shift2,fullDim,interiorDim")
        for row in results["perShift"]:
            s = row["shift"]
            lines.append(f"{s[0]},{s[1]},{row['fullDim']},{row['interiorDim']}")
    else:
        lines.append("check,value")
        for key in sorted(results):
            lines.append(f"{key},{results[key]}")
    lines.append(f"violations,{len(report.get('violations', []))}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_jacobi(args) -> tuple[dict, int]:
    started = time.monotonic()
    spec = _build_spec(args)
    window = Window(args.window)
    rep = jacobi_check(spec, window, workers=worker_count(args.workers))
    report = {
        "config": _config_echo(args, ["window", "workers"]),
        "results": {
            "triplesChecked": rep.triples_checked,
            "pairsChecked": rep.pairs_checked,
            "antisymmetryOK": all(v[0] != "antisymmetry" for v in rep.violations),
            "jacobiOK": all(v[0] != "jacobi" for v in rep.violations),
        },
        "violations": [list(map(str, v)) for v in rep.violations],
    }
    code = EXIT_OK if rep.ok else EXIT_CHECK_FAILED
    return _finish(report, args, started), code


def cmd_solve(args) -> tuple[dict, int]:
    started = time.monotonic()
    spec = _build_spec(args)
    if args.interior >= args.window:
        raise ConfigError("--interior must be smaller than --window")
    window = Window(args.window)
    sweep = shift_sweep(spec, window, args.shifts, args.interior)
    dims = [
        {"shift": list(s), "fullDim": e.full_dim, "interiorDim": e.interior_dim}
        for s, e in sorted(sweep.items())
    ]
    report = {
        "config": _config_echo(args, ["window", "interior", "shifts"]),
        "results": {"dimensions": dims},
        "violations": [],
    }
    code = EXIT_OK
    if args.expect_dim is not None:
        origin = sweep.get((0, 0))
        if origin is None or origin.interior_dim != args.expect_dim:
            got = None if origin is None else origin.interior_dim
            report["results"]["expectation"] = {
                "expectedInteriorDimAtOrigin": args.expect_dim,
                "got": got,
            }
            code = EXIT_CHECK_FAILED
        else:
            report["results"]["expectation"] = {
                "expectedInteriorDimAtOrigin": args.expect_dim,
                "got": origin.interior_dim,
            }
    return _finish(report, args, started), code


def _candidate_from_args(spec, args):
    name = args.candidate
    field = spec.field
    if name == "identity":
        return identity_candidate(spec)
    if name == "thmF":
        shift = _parse_degree(args.ishift) if args.ishift else (0, 0)
        kappa = parse_scalar(field, args.kappa) if args.kappa else field.one
        center = {}
        if args.center:
            for chunk in args.center.split(";"):
                chunk = chunk.strip()
                if not chunk:
                    continue
                degtext, _, val = chunk.partition("=")
                center[_parse_degree(degtext)] = parse_scalar(field, val or "1")
        return thm_f_family(spec, shift, kappa, center)
    if name == "thmH":
        a = parse_scalar(field, args.a) if args.a else field.zero
        c = parse_scalar(field, args.c) if args.c else field.zero
        return thm_h_family(spec, a, c)
    if name == "torus-generic":
        c = parse_scalar(field, args.c) if args.c else field.zero
        d = parse_scalar(field, args.d) if args.d else field.zero
        return torus_generic_family(spec, c, d)
    raise ConfigError(f"unknown candidate family {name!r}")


def cmd_verify(args) -> tuple[dict, int]:
    started = time.monotonic()
    spec = _build_spec(args)
    window = Window(args.window)
    try:
        candidate = _candidate_from_args(spec, args)
        rep = verify_candidate(spec, window, candidate)
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc))
    report = {
        "config": _config_echo(
            args, ["window", "candidate", "kappa", "ishift", "center", "a", "c", "d"]
        ),
        "results": {
            "constraintsChecked": rep.pairs_checked,
            "violationCount": len(rep.violations),
        },
        "violations": [list(map(str, v)) for v in rep.violations[:50]],
    }
    code = EXIT_OK if rep.ok else EXIT_CHECK_FAILED
    return _finish(report, args, started), code


def _product_from_json(spec, window, data) -> ProductTable:
    table = ProductTable(spec, window)
    for item in data:
        a = (tuple(item["a"]), item.get("a_tag", TAG_L))
        b = (tuple(item["b"]), item.get("b_tag", TAG_L))
        value = {}
        for term in item["terms"]:
            e = (tuple(term["degree"]), term.get("tag", TAG_L))
            value[e] = parse_scalar(spec.field, term["coeff"])
        table.set(a, b, value)
    return table


def cmd_tpa(args) -> tuple[dict, int]:
    started = time.monotonic()
    spec = _build_spec(args)
    window = Window(args.window)
    sub = args.tpa_command
    if sub == "probe":
        if args.interior >= args.window:
            raise ConfigError("--interior must be smaller than --window")
        rep = triviality_probe(spec, window, args.interior, shift_cap=args.probe_shifts)
        per_shift = [
            {"shift": list(s), "fullDim": f, "interiorDim": i}
            for s, (f, i) in sorted(rep.per_shift.items())
        ]
        report = {
            "config": _config_echo(args, ["window", "interior", "probe_shifts"]),
            "results": {
                "fullDim": rep.full_dim,
                "interiorDim": rep.interior_dim,
                "perShift": per_shift,
                "associativityFailures": rep.associativity_failures,
                "products": [
                    {"shift": list(s), "index": i, "table": table.to_json()}
                    for s, i, table in rep.tables
                ],
            },
            "violations": [],
        }
        code = EXIT_OK
        if args.expect_dim is not None and rep.interior_dim != args.expect_dim:
            report["results"]["expectation"] = {
                "expectedInteriorDim": args.expect_dim,
                "got": rep.interior_dim,
            }
            code = EXIT_CHECK_FAILED
        return _finish(report, args, started), code

    if sub == "example":
        tau_deg = _parse_degree(args.tau) if args.tau else (spec.t, 0)
        v = _parse_degree(args.v) if args.v else (0, spec.t)
        try:
            table = rank_one_center_product(spec, window, {tau_deg: spec.field.one}, v)
        except Exception as exc:
            raise ConfigError(str(exc))
        axioms = verify_axioms(spec, window, table)
        thmg = thmG_check(spec, window, table)
        report = {
            "config": _config_echo(args, ["window", "tau", "v"]),
            "results": {
                "product": table.to_json(),
                "commutativityOK": axioms.commutativity_ok,
                "associativityViolations": len(axioms.associativity_violations),
                "compatibilityViolations": len(axioms.compatibility_violations),
                "classificationOK": thmg.ok,
            },
            "violations": [
                list(map(str, v)) for v in
                (axioms.associativity_violations + axioms.compatibility_violations)[:50]
            ],
        }
        code = EXIT_OK if (axioms.ok and thmg.ok) else EXIT_CHECK_FAILED
        return _finish(report, args, started), code

    if sub == "verify":
        if not args.product:
            raise ConfigError("tpa verify needs --product FILE with a product table")
        try:
            with open(args.product, encoding="utf-8") as fh:
                data = json.load(fh)
            table = _product_from_json(spec, window, data)
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"cannot load product table: {exc}")
        axioms = verify_axioms(spec, window, table)
        report = {
            "config": _config_echo(args, ["window", "product"]),
            "results": {
                "commutativityOK": axioms.commutativity_ok,
                "associativityChecked": axioms.associativity_checked,
                "associativityViolations": len(axioms.associativity_violations),
                "compatibilityChecked": axioms.compatibility_checked,
                "compatibilityViolations": len(axioms.compatibility_violations),
            },
            "violations": [
                list(map(str, v)) for v in
                (axioms.associativity_violations + axioms.compatibility_violations)[:50]
            ],
        }
        code = EXIT_OK if axioms.ok else EXIT_CHECK_FAILED
        return _finish(report, args, started), code

    raise ConfigError(f"unknown tpa subcommand {sub!r}")


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--algebra",
        required=True,
        choices=["virasoro-generic", "virasoro-root", "torus-generic", "torus-root"],
    )
    p.add_argument("--q", default="2", help="rational q for generic variants, e.g. 2 or 3/2")
    p.add_argument("--t", type=int, help="root-of-unity order (t >= 3)")
    p.add_argument("--window", type=int, required=True, help="window size N")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", help="write the report to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halfder",
        description="Exact checks for half-derivations and transposed Poisson structures",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("jacobi", help="antisymmetry and Jacobi identity on a window")
    _add_common(p)
    p.add_argument("--workers", type=int, default=1, help="worker threads (capped by HALFDER_THREADS)")
    p.set_defaults(func=cmd_jacobi)

    p = subs.add_parser("solve", help="per-shift half-derivation dimensions")
    _add_common(p)
    p.add_argument("--interior", type=int, required=True, help="interior bound M < N")
    p.add_argument("--shifts", type=int, default=1, help="shift bound")
    p.add_argument(
        "--expect-dim",
        type=int,
        help="require this interior dimension at shift (0,0); exit 1 on mismatch",
    )
    p.set_defaults(func=cmd_solve)

    p = subs.add_parser("verify", help="verify a closed-form candidate map")
    _add_common(p)
    p.add_argument("--candidate", required=True, choices=["identity", "thmF", "thmH", "torus-generic"])
    p.add_argument("--kappa", help="thmF constant coefficient")
    p.add_argument("--ishift", help="thmF shift, e.g. '3,0'")
    p.add_argument("--center", help="thmF central coefficients, e.g. '3,0=1;0,3=2/3'")
    p.add_argument("--a", help="thmH coefficient a")
    p.add_argument("--c", help="thmH / torus-generic coefficient c")
    p.add_argument("--d", help="torus-generic coefficient d")
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("tpa", help="transposed Poisson structure checks")
    p.add_argument("tpa_command", choices=["verify", "example", "probe"])
    _add_common(p)
    p.add_argument("--interior", type=int, default=1, help="interior bound M < N (probe)")
    p.add_argument("--probe-shifts", type=int, help="product shift cap (default t or 2)")
    p.add_argument("--expect-dim", type=int, help="required probe interior dimension")
    p.add_argument("--tau", help="center functional support degree for the example, e.g. '3,0'")
    p.add_argument("--v", help="center target degree for the example, e.g. '0,3'")
    p.add_argument("--product", help="JSON product table for tpa verify")
    p.set_defaults(func=cmd_tpa)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.func(args)
    except ConfigError as exc:
        print(f"halfder: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _emit(report, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
