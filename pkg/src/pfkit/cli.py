"""Command-line front end: ``pfkit <verb> ...``.

Exit codes: 0 success, 1 negative mathematical verdict, 2 usage or IO error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from importlib import resources
from pathlib import Path

from . import catalog
from .errors import (
    ConditionFailed,
    DepthExceeded,
    NonExhaustiveFun,
    NotAHomomorphism,
    NotMember,
    ParseError,
    PfkitError,
    TooLarge,
    UndefinedEntry,
    UnsupportedDescriptor,
    UnsupportedOracle,
)
from .formats import parse_field, parse_lift_table, parse_matrix

SCHEMA = "pfkit.report/1"
EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _write(path: str, text: str):
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc


def _matrix_report(A) -> dict:
    return {"field": A.field.descriptor(), "rows": list(A.rows), "cols": list(A.cols), "entries": A.format_rows()}


def _load_hom(text: str):
    from .morphism import catalog_homs, parse_hom

    homs = catalog_homs()
    if text in homs:
        return homs[text]()
    return parse_hom(text)


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------


def cmd_fields(args):
    out = []
    for name in catalog.CATALOG_NAMES:
        F = catalog.field(name)
        out.append(
            {
                "name": name,
                "ring": F.ring.descriptor(),
                "generators": [F.format(g) for g in F.generators],
                "group": "finite" if F.is_group_finite() else "infinite",
                "fun_search": "complete" if F.is_group_finite() else f"box {F.fun_policy.box}"
                + (" (complete)" if F.fun_policy.exhaustive else " (bounded)"),
            }
        )
    return {"status": "ok", "fields": out}, EXIT_OK


def cmd_fun(args):
    F = parse_field(args.field)
    fs = F.fundamentals()
    return {
        "status": "ok",
        "field": F.descriptor(),
        "set": fs.format(),
        "size": len(fs),
        "exhaustive": fs.exhaustive,
        "box": fs.bound,
        "reason": fs.reason,
    }, EXIT_OK


def cmd_check(args):
    try:
        A = parse_matrix(_read(args.matrix))
    except UndefinedEntry as exc:
        return {"status": "invalid", "witness": {"kind": "entry", "detail": str(exc)}}, EXIT_NEGATIVE
    v = A.validate()
    report = {"status": "valid" if v.valid else "invalid", "matrix": _matrix_report(A)}
    if not v.valid:
        report["witness"] = {"rows": list(v.rows), "cols": list(v.cols), "determinant": A.field.format(v.value)}
        return report, EXIT_NEGATIVE
    return report, EXIT_OK


def cmd_matroid(args):
    from .matroid import matroid_from, name_of

    A = parse_matrix(_read(args.matrix))
    if not A.is_valid():
        v = A.validate()
        return {"status": "invalid", "witness": {"rows": list(v.rows), "cols": list(v.cols)}}, EXIT_NEGATIVE
    M = matroid_from(A)
    report = {
        "status": "ok",
        "rank": M.rank,
        "size": len(M),
        "bases": len(M.bases),
        "connectivity": M.connectivity_flags(A.rows),
    }
    try:
        report["name"] = name_of(M)
    except TooLarge:
        report["name"] = None
    if args.export:
        _write(args.export, M.to_text())
        report["exported"] = args.export
    return report, EXIT_OK


def _lifting_setup(args):
    from .lift import LiftingFunction

    A = parse_matrix(_read(args.matrix))
    hom = _load_hom(args.hom).verify()
    if hom.target != A.field:
        raise UsageError(f"hom maps into {hom.target.descriptor()}, matrix is over {A.field.descriptor()}")
    if args.target and parse_field(args.target) != hom.source:
        raise UsageError(f"--target {args.target} differs from the hom source {hom.source.descriptor()}")
    if args.lift_table:
        lf = parse_lift_table(_read(args.lift_table), hom)
        bad = lf.violations()
        if bad:
            raise UsageError(f"not a lifting function: {bad[0]}")
    else:
        lf = LiftingFunction.from_hom(hom)
    depth = args.depth
    return A, hom, lf, depth


def _certificate_report(c) -> dict:
    out = {
        "kind": c.kind,
        "transposed": c.transposed,
        "name": c.name,
        "minor": _matrix_report(c.minor),
        "pivots": [list(e) for e in c.path],
        "witness": c.witness,
    }
    if c.p is not None:
        out["p"] = c.minor.field.format(c.p)
        out["q"] = c.minor.field.format(c.q)
    return out


def _depth_arg(args, A):
    from .lift import default_depth

    return default_depth(A) if args.depth is None else (None if args.depth < 0 else args.depth)


def _depth_label(depth) -> str | int:
    return "full" if depth is None else depth


def cmd_lift(args):
    from .lift import check_equivalence_conditions, lift

    A, hom, lf, _ = _lifting_setup(args)
    depth = _depth_arg(args, A)
    try:
        outcome = lift(A, lf, depth)
    except DepthExceeded as exc:
        return {"status": "depth-exceeded", "explored": exc.explored, "depth": _depth_label(depth)}, EXIT_NEGATIVE
    report = {"status": outcome.status, "hom": hom.describe(), "depth": _depth_label(depth), "explored": outcome.explored}
    if outcome.lifted is not None:
        report["lifted"] = _matrix_report(outcome.lifted)
    if outcome.certificate is not None:
        report["certificate"] = _certificate_report(outcome.certificate)
    if outcome.witness is not None:
        report["witness"] = outcome.witness
    try:
        eq = check_equivalence_conditions(lf, strict=False)
        report["conditions"] = {"verdict": eq.verdict, "checks": eq.conditions, "lifting_table": [f"{p} -> {q}" for p, q in eq.lifting_table]}
    except NonExhaustiveFun:
        report["conditions"] = None
    return report, EXIT_OK if outcome.status == "global" else EXIT_NEGATIVE


def cmd_certify(args):
    from .lift import certificate_search

    A, hom, lf, _ = _lifting_setup(args)
    depth = _depth_arg(args, A)
    try:
        cert = certificate_search(A, lf, depth)
    except DepthExceeded as exc:
        return {"status": "depth-exceeded", "explored": exc.explored, "depth": _depth_label(depth)}, EXIT_NEGATIVE
    if cert is None:
        return {"status": "none", "depth": _depth_label(depth)}, EXIT_OK
    return {"status": "certificate", "depth": _depth_label(depth), "certificate": _certificate_report(cert)}, EXIT_NEGATIVE


def cmd_liftpf(args):
    from .liftpf import emit, generate

    F = parse_field(args.field)
    restrict = [parse_matrix(_read(p)) for p in args.restrict] if args.restrict else None
    I = generate(F, restrict)
    text = emit(I)
    if args.emit_ideal:
        _write(args.emit_ideal, text)
    counts = {}
    for g in I.generators:
        counts[g.item] = counts.get(g.item, 0) + 1
    report = {
        "status": "ok",
        "field": F.descriptor(),
        "indeterminates": len(I.fundamentals),
        "generators": len(I.generators),
        "by_item": counts,
        "legend": [f"{s} = {v}" for s, v in I.legend()],
    }
    if args.emit_ideal:
        report["written"] = args.emit_ideal
    else:
        report["ideal"] = text.splitlines()
    return report, EXIT_OK


def cmd_liftpf_check(args):
    from .liftpf import canonical_assignment, check_hom_from_lift, parse, parse_assignment

    I = parse(_read(args.ideal))
    C = parse_field(args.into)
    if args.assign == "canonical":
        if C != I.source:
            raise UsageError("the canonical assignment maps into the ideal's own field")
        assignment = canonical_assignment(I)
    else:
        assignment = parse_assignment(_read(args.assign), I, C)
    v = check_hom_from_lift(I, C, assignment)
    report = {"status": "passes" if v.holds else "fails", "into": C.descriptor(), "checked": v.checked}
    if v.failure:
        report["witness"] = v.failure
    return report, EXIT_OK if v.holds else EXIT_NEGATIVE


def run_manifest(manifest: dict) -> list[dict]:
    from .lift import LiftingFunction, check_equivalence_conditions
    from .liftpf import check_hom_from_lift, table_row_assignment
    from .morphism import catalog_hom

    results = []
    for item in manifest["checks"]:
        start = time.perf_counter()
        detail = ""
        try:
            if item["kind"] == "fun":
                fs = catalog.field(item["field"]).fundamentals()
                ok = len(fs) == item["size"] and fs.exhaustive
                detail = fs.format() if len(fs) <= 12 else f"{len(fs)} elements"
            elif item["kind"] == "equivalence":
                hom = catalog_hom(item["hom"]).verify()
                lf = LiftingFunction.from_hom(hom)
                report = check_equivalence_conditions(lf)
                ok = report.passed
                detail = report.verdict
            elif item["kind"] == "liftpf":
                I, C, assignment = table_row_assignment(item["factors"], item["candidate"])
                v = check_hom_from_lift(I, C, assignment)
                ok = v.holds
                detail = f"{v.checked} generators vanish" if ok else str(v.failure)
            else:
                raise UsageError(f"unknown manifest check kind {item['kind']!r}")
        except (PfkitError, ValueError) as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(
            {"title": item["title"], "pass": ok, "detail": detail, "seconds": round(time.perf_counter() - start, 3)}
        )
    return results


def cmd_verify_catalog(args):
    if args.manifest:
        text = _read(args.manifest)
    else:
        text = resources.files("pfkit").joinpath("data/catalog_manifest.json").read_text()
    try:
        manifest = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad manifest: {exc}") from exc
    results = run_manifest(manifest)
    ok = all(r["pass"] for r in results)
    return {"status": "pass" if ok else "fail", "checks": results}, EXIT_OK if ok else EXIT_NEGATIVE


COMMANDS = {
    "fields": cmd_fields,
    "fun": cmd_fun,
    "check": cmd_check,
    "matroid": cmd_matroid,
    "lift": cmd_lift,
    "certify": cmd_certify,
    "liftpf": cmd_liftpf,
    "liftpf-check": cmd_liftpf_check,
    "verify-catalog": cmd_verify_catalog,
}


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def render_text(report: dict) -> str:
    if report.get("command") == "verify-catalog" and "checks" in report:
        lines = [f"{'PASS' if r['pass'] else 'FAIL'} {r['title']}: {r['detail']}" for r in report["checks"]]
        lines.append(f"status: {report['status']}")
        return "\n".join(lines) + "\n"
    if report.get("command") == "fun" and "set" in report:
        head = f"{report['set']} {'exhaustive' if report['exhaustive'] else 'non-exhaustive'}"
        rest = {k: v for k, v in report.items() if k not in ("set", "exhaustive")}
        return head + "\n" + _render(rest, 0)
    return _render(report, 0)


def _render(value, indent: int) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        out = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _is_flat_list(v):
                out.append(f"{pad}{k}:\n" + _render(v, indent + 1))
            else:
                out.append(f"{pad}{k}: {_scalar(v)}\n")
        return "".join(out)
    if isinstance(value, list):
        out = []
        for v in value:
            if isinstance(v, dict):
                out.append(f"{pad}-\n" + _render(v, indent + 1))
            else:
                out.append(f"{pad}- {_scalar(v)}\n")
        return "".join(out)
    return f"{pad}{_scalar(value)}\n"


def _is_flat_list(v) -> bool:
    return isinstance(v, list) and all(isinstance(x, (str, int, float, bool)) or x is None for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=None, help="seed for any randomized step")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="pfkit", description="Partial fields, P-matrices and lifts.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("fields", parents=[common], help="list catalog partial fields")
    s = sub.add_parser("fun", parents=[common], help="fundamental elements of a field")
    s.add_argument("field")
    s = sub.add_parser("check", parents=[common], help="validate a matrix file")
    s.add_argument("matrix")
    s = sub.add_parser("matroid", parents=[common], help="matroid of a matrix file")
    s.add_argument("matrix")
    s.add_argument("--export")
    for verb in ("lift", "certify"):
        s = sub.add_parser(verb, parents=[common], help=f"{verb} a matrix along a homomorphism")
        s.add_argument("matrix")
        s.add_argument("--hom", required=True, help="catalog hom name or 'hom <src> -> <tgt> : g=<elem>, ...'")
        s.add_argument("--target", help="the lifted partial field (checked against the hom source)")
        s.add_argument("--lift-table")
        s.add_argument("--depth", type=int, help="pivot closure depth (negative: full)")
        s.add_argument("--report", choices=("text", "json"), help="alias for --format")
    s = sub.add_parser("liftpf", parents=[common], help="emit the lift ideal of a field")
    s.add_argument("field")
    s.add_argument("--restrict", nargs="+")
    s.add_argument("--emit-ideal")
    s = sub.add_parser("liftpf-check", parents=[common], help="evaluate an ideal under an assignment")
    s.add_argument("ideal")
    s.add_argument("--into", required=True)
    s.add_argument("--assign", required=True, help="assignment file or 'canonical'")
    s = sub.add_parser("verify-catalog", parents=[common], help="run the catalog theorem table")
    s.add_argument("--manifest")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "report", None):
        args.format = args.report
    if args.seed is not None:
        random.seed(args.seed)
    try:
        report, code = COMMANDS[args.command](args)
    except (UsageError, ParseError, UnsupportedDescriptor, UnsupportedOracle, NonExhaustiveFun) as exc:
        print(f"pfkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotAHomomorphism, ConditionFailed, NotMember) as exc:
        report, code = {"status": "failed", "error": type(exc).__name__, "detail": str(exc)}, EXIT_NEGATIVE
    report = {"schema": SCHEMA, "command": args.command, **report}
    if args.seed is not None:
        report["seed"] = args.seed
    text = json.dumps(report, indent=2, default=str) + "\n" if args.format == "json" else render_text(report)
    if args.output:
        try:
            Path(args.output).write_text(text)
        except OSError as exc:
            print(f"pfkit: error: cannot write {args.output}: {exc.strerror}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
