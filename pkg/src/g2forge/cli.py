"""g2forge command line: check / report / classify / extend / catalog / parse.

Exit codes: 0 ok or classified, 1 validation error, 2 inconclusive
classification, 3 golden mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys

from .catalog import (
    CatalogEntry,
    compare_golden,
    load_catalog,
    lookup,
    matrix_to_strings,
)
from .errors import G2ForgeError, ParseError
from .exterior import parse_form, render_form
from .extension import (
    ExtensionSpec,
    SU3Data,
    classify_almost_abelian,
    closedness_conditions,
    extension_block_formulas,
    extension_ricci_identities,
)
from .g2core import G2Structure, build
from .liealg import (
    LieAlgebraData,
    algebra_from_json,
    algebra_to_json,
    parse_salamon,
    render_salamon,
)
from .linalg import Matrix
from .reporting import (
    check_report,
    connection_dict,
    structure_report,
)
from .scalars import parse_scalar, render_scalar

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INCONCLUSIVE = 2
EXIT_GOLDEN = 3


def _load_structure(source: str) -> tuple[str, LieAlgebraData, object, int]:
    """Resolve a catalog name or a structure file to (name, alg, phi, orient)."""
    try:
        entry = lookup(source)
        return entry.name, entry.algebra, entry.phi, entry.orientation
    except G2ForgeError:
        pass
    with open(source, encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.strip()
    if stripped.startswith("("):
        alg = parse_salamon(stripped)
        raise G2ForgeError(
            "structure files need a 3-form; got bare structure equations "
            f"for {render_salamon(alg)} (use a JSON file with a 'phi' field)"
        )
    data = json.loads(text)
    if "salamon" in data:
        alg = parse_salamon(data["salamon"], name=data.get("name"))
    else:
        alg = algebra_from_json(data)
    phi = parse_form(data["phi"], alg.dim, degree=3)
    name = data.get("name") or source
    return name, alg, phi, int(data.get("orientation", 1))


def _emit(data: dict, as_json: bool):
    if as_json:
        print(json.dumps(data, indent=1))
        return
    for key, value in data.items():
        if isinstance(value, list) and value and isinstance(value[0], list):
            print(f"{key}:")
            for row in value:
                print("   [" + ", ".join(str(x) for x in row) + "]")
        elif isinstance(value, dict):
            print(f"{key}:")
            for k, v in value.items():
                print(f"   {k}: {v}")
        else:
            print(f"{key}: {value}")


def cmd_check(args) -> int:
    name, alg, phi, orientation = _load_structure(args.source)
    g2 = build(alg, phi, orientation)
    _emit(check_report(g2, name), args.json)
    return EXIT_OK


def cmd_report(args) -> int:
    name, alg, phi, orientation = _load_structure(args.source)
    g2 = build(alg, phi, orientation)
    lambda_ = parse_scalar(args.lambda_) if args.lambda_ else None
    entry = None
    if args.golden:
        entry = lookup(args.source)
    include_connection = bool(entry and "connection" in entry.expected)
    report = structure_report(
        g2, name, lambda_=lambda_, include_connection=include_connection
    )
    if include_connection:
        conn = report.pop("connection")
        report["connection"] = [
            {"i": i, "j": j, "v": v} for (i, j), v in sorted(conn.items())
        ]
    _emit(report, args.json)
    if entry is not None:
        computed = dict(report)
        if include_connection:
            computed["connection"] = {
                (item["i"], item["j"]): item["v"] for item in report["connection"]
            }
        diffs = compare_golden(entry, computed)
        if diffs:
            print("golden mismatches:", file=sys.stderr)
            for field, want, got in diffs:
                print(f"  {field}: expected {want!r}, got {got!r}", file=sys.stderr)
            return EXIT_GOLDEN
        print(f"golden: pass ({len(entry.expected)} fields)")
    return EXIT_OK


def cmd_classify(args) -> int:
    from .soliton import classify

    name, alg, phi, orientation = _load_structure(args.source)
    g2 = build(alg, phi, orientation)
    lambda_ = parse_scalar(args.lambda_) if args.lambda_ else None
    report = classify(g2, lambda_)
    from .reporting import classification_dict

    payload = {"name": name, **classification_dict(report)}
    _emit(payload, args.json)
    return EXIT_INCONCLUSIVE if report.inconclusive else EXIT_OK


def cmd_extend(args) -> int:
    if args.su3 != "model":
        raise G2ForgeError("only the model SU(3) gauge is supported")
    with open(args.derivation, encoding="utf-8") as fh:
        data = json.load(fh)
    d_rows = data["D"] if isinstance(data, dict) else data
    d_map = Matrix([[parse_scalar(str(e)) for e in row] for row in d_rows])
    if isinstance(data, dict) and "h" in data and data["h"] is not None:
        h = algebra_from_json(data["h"])
    else:
        h = LieAlgebraData.abelian(6, name="R6")
    spec = ExtensionSpec(su3=SU3Data.model(h), D=d_map)
    conditions = closedness_conditions(spec)
    payload = {
        "h": render_salamon(h),
        "closedness": {
            "d_omega_zero": conditions.d_omega_zero,
            "d_rho_plus_zero": conditions.d_rho_plus_zero,
            "theta_D_rho_plus_zero": conditions.theta_D_rho_plus_zero,
        },
    }
    if not conditions.all_closed:
        payload["closed"] = False
        if h.is_abelian():
            payload["decision"] = classify_almost_abelian(d_map).decision
        _emit(payload, args.json)
        return EXIT_VALIDATION
    from .g2core import check_theta_identity

    alg, g2 = spec_build = None, None
    from .extension import build_extension

    alg, g2 = build_extension(spec)
    blocks = extension_block_formulas(spec)
    data_t = g2.torsion()
    payload.update(
        {
            "closed": True,
            "extension": render_salamon(alg),
            "tau": render_form(data_t.tau),
            "scal": render_scalar(data_t.scal),
            "block_formulas_match_generic": (
                blocks.tau_sq == data_t.tau_sq
                and blocks.ric == data_t.ric
                and blocks.Q == data_t.Q
                and blocks.scal == data_t.scal
            ),
            "ricci_identities": extension_ricci_identities(spec),
            "theta_identity": check_theta_identity(g2),
        }
    )
    if h.is_abelian():
        report = classify_almost_abelian(d_map)
        payload["decision"] = report.decision
        if report.decision == "GradientOnlyAsProduct":
            payload["lambda_candidates"] = [
                render_scalar(v) for v in report.lambda_candidates
            ]
            payload["div_s_xi_target"] = render_scalar(report.div_s_xi_target)
    _emit(payload, args.json)
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.action != "list":
        raise G2ForgeError(f"unknown catalog action {args.action!r}")
    entries = load_catalog()
    if args.json:
        payload = [
            {
                "name": e.name,
                "aliases": list(e.aliases),
                "structure": render_salamon(e.algebra),
                "orientation": e.orientation,
                "notes": e.notes,
            }
            for e in sorted(entries.values(), key=lambda e: e.name)
        ]
        print(json.dumps(payload, indent=1))
        return EXIT_OK
    for e in sorted(entries.values(), key=lambda e: e.name):
        alias = f" (aliases: {', '.join(e.aliases)})" if e.aliases else ""
        print(f"{e.name}{alias}: {render_salamon(e.algebra)}")
    return EXIT_OK


def cmd_parse(args) -> int:
    text = args.text
    try:
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    except OSError:
        pass
    alg = parse_salamon(text.strip())
    payload = algebra_to_json(alg)
    payload["salamon"] = render_salamon(alg)
    _emit(payload, args.json)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="g2forge",
        description=(
            "Exact computations for left-invariant closed G2-structures: "
            "torsion, curvature, soliton verification and gradient-soliton "
            "classification."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate an algebra/form pair")
    p.add_argument("source", help="catalog name or structure JSON file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("report", help="full torsion + classification report")
    p.add_argument("source")
    p.add_argument("--json", action="store_true")
    p.add_argument("--golden", action="store_true",
                   help="compare against the catalog expected record")
    p.add_argument("--lambda", dest="lambda_", default=None,
                   help="soliton constant to use in classification")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("classify", help="gradient-soliton classification only")
    p.add_argument("source")
    p.add_argument("--json", action="store_true")
    p.add_argument("--lambda", dest="lambda_", default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("extend", help="build a one-dimensional extension")
    p.add_argument("--su3", default="model")
    p.add_argument("--derivation", required=True,
                   help="JSON file with the 6x6 matrix D (optionally an 'h' algebra)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("catalog", help="catalog inspection")
    p.add_argument("action", choices=["list"])
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("parse", help="parse structure-equation notation")
    p.add_argument("text", help="tuple text or a file containing it")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_parse)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except G2ForgeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
