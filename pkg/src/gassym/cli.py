"""Command-line verification campaigns and trajectory export.

Subcommands:
  verify-algebra     Jacobi identity plus realization-vs-table diff
  verify-invariants  catalog closure/annihilation/rank checks
  classify           isomorphism-class table and fingerprint consistency
  verify-solution    submodel and full-system residuals, flow geometry
  trace              RK4 particle trajectory exported as CSV

Exit codes: 0 all requested checks passed, 1 a check failed, 2 usage
error (unknown entry id, empty time range, bad parameters).  Reports are
deterministic for a fixed seed and configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import sympy as sp

from . import __version__, catalog, classify, numerics, submodel
from .fields import realization_table_diff
from .liealg import l12

__all__ = ["main"]

_USAGE_ERROR = 2


class UsageError(Exception):
    pass


def _empty_report(seed: int) -> dict:
    return {
        "version": __version__,
        "seed": seed,
        "algebra": None,
        "catalog": None,
        "classes": None,
        "solutions": None,
        "traces": None,
    }


def _parse_params(text: str | None) -> dict:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if "=" not in item:
            raise UsageError(f"bad parameter {item!r}; expected k=v")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = sp.nsimplify(v.strip())
        except (sp.SympifyError, ValueError):
            raise UsageError(f"cannot parse parameter value {v!r}")
    return out


def _resolve_ids(requested: list[str], known: list[str]) -> list[str]:
    if not requested or requested == ["all"]:
        return list(known)
    unknown = [eid for eid in requested if eid not in known]
    if unknown:
        raise UsageError(f"unknown entry ids: {unknown}")
    return list(requested)


def _map_jobs(fn, items, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# --------------------------------------------------------------------------
# subcommands


def cmd_verify_algebra(args, report: dict) -> bool:
    alg = l12()
    jacobi = alg.jacobi_report()
    diff = realization_table_diff()
    report["algebra"] = {
        "dim": alg.dim,
        "jacobi_failures": [list(tr) for tr in jacobi],
        "realization_diff": [list(p) for p in diff],
        "passed": not jacobi and not diff,
    }
    if args.format == "text":
        _print_bracket_table(alg)
    return report["algebra"]["passed"]


def _print_bracket_table(alg) -> None:
    for i, a in enumerate(alg.labels):
        for j in range(i + 1, alg.dim):
            vec = alg.bracket(
                [sp.Integer(k == i) for k in range(alg.dim)],
                [sp.Integer(k == j) for k in range(alg.dim)],
            )
            terms = [
                f"{'-' if c == -1 else '' if c == 1 else str(c) + '*'}{lbl}"
                for c, lbl in zip(vec, alg.labels)
                if c != 0
            ]
            print(f"[{a}, {alg.labels[j]}] = {' + '.join(terms) if terms else '0'}")


def cmd_verify_invariants(args, report: dict) -> bool:
    ids = _resolve_ids(args.entries, catalog.catalog_ids())
    params = _parse_params(args.params)
    if params and len(ids) == 1:
        ent = catalog.get_entry(ids[0], **{k: v for k, v in params.items()})
        rep = catalog.verify_invariants(ent, seed=args.seed, tol=args.tol_zero)
        reports = [rep]
    else:
        if params:
            raise UsageError("--params requires exactly one entry id")
        reports = _map_jobs(
            lambda eid: catalog.verify_entry(eid, seed=args.seed, tol=args.tol_zero),
            ids,
            args.jobs,
        )
    report["catalog"] = {
        rep.entry_id: {
            "passed": rep.passed,
            "closure": rep.closure_ok,
            "rank": rep.rank,
            "samples": len(rep.samples),
            "simplifier_gaps": [list(k) for k in rep.simplifier_gaps],
            "verdicts": {f"{g},{i}": v for (g, i), v in sorted(rep.verdicts.items())},
        }
        for rep in reports
    }
    return all(rep.passed for rep in reports)


def cmd_classify(args, report: dict) -> bool:
    ids = _resolve_ids(args.entries, classify.class_ids())
    reports = _map_jobs(classify.verify_class, ids, args.jobs)
    cons = classify.fingerprint_consistency(ids)
    report["classes"] = {
        "rows": {
            rep.entry_id: {
                "label": rep.label,
                "passed": rep.passed,
                "cases": rep.cases,
            }
            for rep in reports
        },
        "fingerprints": {
            eid: {
                "derived_series": list(fp.derived_series),
                "lower_central_series": list(fp.lower_central_series),
                "center_dim": fp.center_dim,
                "killing_rank": fp.killing_rank,
                "killing_signature": list(fp.killing_signature),
            }
            for eid, fp in cons.fingerprints.items()
        },
        "label_consistency": cons.label_ok,
        "collisions": [list(p) for p in cons.collisions],
        "passed": all(rep.passed for rep in reports) and cons.passed,
    }
    return report["classes"]["passed"]


_SOLUTION_KINDS = (
    "isochoric-general",
    "isochoric-reduced",
    "nonisochoric-general",
    "nonisochoric-reduced",
)


def cmd_verify_solution(args, report: dict) -> bool:
    kinds = _resolve_ids(args.kinds, list(_SOLUTION_KINDS))
    out = {}
    for kind in kinds:
        s = submodel.solution_family(kind)
        reduced = submodel.reduced_residuals(s.u, s.v, s.w, s.rho, s.P1)
        full = submodel.full_residuals(s)
        entry = {
            "reduced_residuals_zero": all(r == 0 for r in reduced),
            "full_residuals_zero": all(r == 0 for r in full),
            "vorticity": [str(c) for c in submodel.vorticity(s)],
        }
        if kind.endswith("-reduced"):
            fm = submodel.flow_map(s)
            entry["flow_consistent"] = all(
                r == 0 for r in submodel.flow_consistency(s, fm)
            )
            jac = submodel.jacobian_det(fm)
            entry["jacobian_det"] = str(jac)
            expected_jac = sp.Integer(1) if kind.startswith("isochoric") else submodel.t
            geo = submodel.geometry_checks(s)
            entry["geometry"] = {k: v["ok"] for k, v in geo.items()}
            entry["passed"] = (
                entry["reduced_residuals_zero"]
                and entry["full_residuals_zero"]
                and entry["flow_consistent"]
                and jac == expected_jac
                and all(entry["geometry"].values())
            )
        else:
            red, params = submodel.reduce_general(kind)
            target = submodel.solution_family(kind.replace("general", "reduced"))
            entry["reduction_exact"] = all(
                submodel.canonicalize(a - b) == 0
                for a, b in zip(
                    (red.u, red.v, red.w, red.rho, red.P),
                    (target.u, target.v, target.w, target.rho, target.P),
                )
            )
            entry["passed"] = (
                entry["reduced_residuals_zero"]
                and entry["full_residuals_zero"]
                and entry["reduction_exact"]
            )
        out[kind] = entry
    report["solutions"] = out
    return all(e["passed"] for e in out.values())


def cmd_trace(args, report: dict) -> bool:
    if args.kind not in ("isochoric-reduced", "nonisochoric-reduced"):
        raise UsageError(f"trace supports reduced kinds, not {args.kind!r}")
    if args.t1 <= args.t0:
        raise UsageError("empty time range: need t1 > t0")
    params = _parse_params(args.params)
    binding = {submodel.k0: 1, submodel.m0: 1, submodel.rho0: 1}
    for k, v in params.items():
        binding[sp.Symbol(k)] = v
    s = submodel.solution_family(args.kind).subs(binding)
    try:
        p0 = tuple(float(v) for v in args.x0.split(","))
    except ValueError:
        raise UsageError(f"bad initial point {args.x0!r}")
    if len(p0) != 3:
        raise UsageError("initial point must be x,y,z")
    vel = numerics.velocity_function(s, {})
    tr = numerics.integrate(
        vel,
        p0,
        args.t0,
        args.t1,
        args.h,
        metadata={
            "kind": args.kind,
            "x0": list(p0),
            "u0": args.u0,
            "params": {str(k): str(v) for k, v in binding.items()},
        },
    )
    if args.out:
        numerics.write_csv(tr, args.out)
    end = tr.points[-1]
    report["traces"] = [
        {
            "kind": args.kind,
            "initial": list(p0),
            "u0": args.u0,
            "t0": args.t0,
            "t1": args.t1,
            "h": args.h,
            "samples": int(len(tr.ts)),
            "endpoint": [float(end[0]), float(end[1]), float(end[2])],
            "csv": args.out,
        }
    ]
    return True


# --------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gassym",
        description="verify the symmetry-algebra results of the gas "
        "dynamics system with state equation P = f(rho) + S",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp_):
        sp_.add_argument("--seed", type=int, default=0)
        sp_.add_argument("--tol-zero", dest="tol_zero", type=float, default=1e-9)
        sp_.add_argument("--jobs", type=int, default=1)
        sp_.add_argument("--format", choices=("json", "text"), default="json")
        sp_.add_argument("--out", default=None)

    pa = sub.add_parser("verify-algebra", help="Jacobi + table certification")
    common(pa)

    pi = sub.add_parser("verify-invariants", help="catalog verification")
    pi.add_argument("entries", nargs="*", default=[], metavar="ID")
    pi.add_argument("--params", default=None, help="k=v,... for one entry")
    common(pi)

    pc = sub.add_parser("classify", help="isomorphism-class verification")
    pc.add_argument("entries", nargs="*", default=[], metavar="ID")
    common(pc)

    ps = sub.add_parser("verify-solution", help="solution family verification")
    ps.add_argument("kinds", nargs="*", default=[], metavar="KIND")
    common(ps)

    pt = sub.add_parser("trace", help="integrate one particle trajectory")
    pt.add_argument("kind", choices=("isochoric-reduced", "nonisochoric-reduced"))
    pt.add_argument("--x0", default="0,0,0", help="initial point x,y,z")
    pt.add_argument("--u0", type=float, default=0.0)
    pt.add_argument("--t0", type=float, default=0.0)
    pt.add_argument("--t1", type=float, default=3.0)
    pt.add_argument("--h", type=float, default=1e-3)
    pt.add_argument("--params", default=None, help="constants k0=...,m0=...,rho0=...")
    common(pt)
    return p


_COMMANDS = {
    "verify-algebra": cmd_verify_algebra,
    "verify-invariants": cmd_verify_invariants,
    "classify": cmd_classify,
    "verify-solution": cmd_verify_solution,
    "trace": cmd_trace,
}


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.format == "text":
        lines = []
        for key in ("algebra", "catalog", "classes", "solutions", "traces"):
            if report.get(key) is not None:
                lines.append(f"{key}: {json.dumps(report[key], sort_keys=True)}")
        text = "\n".join(lines)
    if args.command == "trace" and args.out:
        # CSV already written; report goes to stdout
        print(text)
    elif args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    report = _empty_report(getattr(args, "seed", 0))
    try:
        ok = _COMMANDS[args.command](args, report)
    except (UsageError, catalog.UnknownEntryError, catalog.ConstraintError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE_ERROR
    _emit(report, args)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
