"""Command line interface: ``python3 -m stepwise <command> ...``.

Exit status: 0 when every check passes, 1 when a check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache

from .cascade import build_cascade
from .chevalley import build_constants
from .density import easy_tilde_check, plancherel_data
from .errors import QuadratureFailure, StepwiseError
from .parabolic import decompose, invariance_class, verify_structure
from .rootsys import Family, RootSystemType, build_system

COMMANDS = ("roots", "cascade", "decompose", "verify", "density", "chain", "verify-numeric", "sweep")


class UsageError(Exception):
    pass


@lru_cache(maxsize=None)
def _context(family: str, rank: int):
    system = build_system(RootSystemType(Family(family), rank))
    cascade = build_cascade(system)
    table = build_constants(system) if system.is_split and system.family is not Family.BC else None
    return system, cascade, table


def parse_phi(text: str | None, rank: int) -> tuple[int, ...]:
    if text is None or text.strip() == "":
        return ()
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            i = int(tok)
        except ValueError:
            raise UsageError(f"--phi: {tok!r} is not an integer") from None
        if not 1 <= i <= rank:
            raise UsageError(f"--phi: {tok!r} is outside 1..{rank}")
        out.append(i)
    return tuple(sorted(set(out)))


def _invariance_labels(system, cascade, decomp) -> list[str]:
    return [
        "invariant" if status == "invariant" else "not-invariant/undetermined-weak"
        for status, _ in invariance_class(system, cascade, decomp)[0]
    ]


def _decompose_report(family: str, rank: int, phi) -> tuple[dict, bool]:
    system, cascade, _ = _context(family, rank)
    decomp = decompose(system, cascade, phi)
    report = verify_structure(system, cascade, decomp)
    out = decomp.to_dict()
    out["lemmas"] = report.to_dict()["lemmas"]
    out["failures"] = report.to_dict()["failures"]
    out["invariance"] = _invariance_labels(system, cascade, decomp)
    return out, report.passed


def _density_report(family: str, rank: int, phi) -> tuple[dict, bool]:
    system, cascade, table = _context(family, rank)
    if table is None:
        raise UsageError("density needs a split system of type A, B, C or D")
    decomp = decompose(system, cascade, phi)
    data = plancherel_data(decomp, table)
    out = data.to_dict()
    out["phi"] = list(phi)
    labels = _invariance_labels(system, cascade, decomp)
    out["invariance"] = labels
    tilde = {}
    for g, lab in zip(decomp.groups, labels):
        if lab != "invariant":
            tilde[str(g.j)] = easy_tilde_check(decomp, table, g.j)
    out["easy_tilde"] = tilde
    ok = data.ledger.holds() and all(tilde.values())
    return out, ok


def sweep_one(args) -> dict:
    family, rank, phi = args
    summary = {"phi": list(phi)}
    ok = True
    try:
        dec, passed = _decompose_report(family, rank, phi)
        summary["groups"] = len(dec["groups"])
        summary["failed_lemmas"] = sorted(k for k, v in dec["lemmas"].items() if v != "pass")
        ok &= passed
        den, dens_ok = _density_report(family, rank, phi)
        summary["P"] = den["P"]
        summary["c"] = den["c"]
        summary["ledger"] = "pass" if dens_ok else "fail"
        ok &= dens_ok
    except StepwiseError as exc:
        summary["error"] = f"{type(exc).__name__}: {exc}"
        ok = False
    summary["pass"] = bool(ok)
    return summary


def _workers() -> int:
    raw = os.environ.get("PC_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise UsageError(f"PC_THREADS must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


def run_sweep(family: str, rank: int) -> dict:
    _context(family, rank)  # validate before fanning out
    jobs = [
        (family, rank, phi)
        for k in range(rank + 1)
        for phi in itertools.combinations(range(1, rank + 1), k)
    ]
    workers = min(_workers(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(sweep_one, jobs, chunksize=4))
    else:
        results = [sweep_one(j) for j in jobs]
    results.sort(key=lambda r: (len(r["phi"]), r["phi"]))
    return {
        "family": family,
        "rank": rank,
        "subsets": len(results),
        "passed": sum(r["pass"] for r in results),
        "all_pass": all(r["pass"] for r in results),
        "results": results,
    }


# -- text rendering --------------------------------------------------------------


def _text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        parts = []
        for x in obj:
            if isinstance(x, dict):
                parts.append(f"{pad}-\n{_text(x, indent + 1)}")
            else:
                parts.append(f"{pad}- {_inline(x)}")
        return "\n".join(parts)
    return f"{pad}{_inline(obj)}"


def _flat(v) -> bool:
    if isinstance(v, dict):
        return all(not isinstance(x, (dict, list)) for x in v.values())
    return all(not isinstance(x, dict) for x in v)


def _inline(v) -> str:
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def emit(payload: dict, fmt: str, out: str | None):
    if fmt == "json":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        text = _text(payload) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands ------------------------------------------------------------------------


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"{args.command} needs --{n.replace('_', '-')}")


def cmd_roots(args):
    _need(args, "family", "rank")
    system, _, _ = _context(args.family, args.rank)
    return system.to_dict(), True


def cmd_cascade(args):
    _need(args, "family", "rank")
    _, cascade, _ = _context(args.family, args.rank)
    return cascade.to_dict(), True


def cmd_decompose(args):
    _need(args, "family", "rank")
    return _decompose_report(args.family, args.rank, parse_phi(args.phi, args.rank))


def cmd_verify(args):
    _need(args, "family", "rank")
    system, cascade, _ = _context(args.family, args.rank)
    if args.phi is not None:
        subsets = [parse_phi(args.phi, args.rank)]
    else:
        subsets = [
            phi for k in range(args.rank + 1) for phi in itertools.combinations(range(1, args.rank + 1), k)
        ]
    reports = [verify_structure(system, cascade, phi).to_dict() for phi in subsets]
    ok = all(not r["failures"] for r in reports)
    if len(reports) == 1:
        return reports[0], ok
    return {"family": args.family, "rank": args.rank, "all_pass": ok, "reports": reports}, ok


def cmd_density(args):
    _need(args, "family", "rank")
    return _density_report(args.family, args.rank, parse_phi(args.phi, args.rank))


def cmd_chain(args):
    from .limits import check_family, inversion_constant, load_chain

    _need(args, "chain")
    try:
        chain = load_chain(args.chain)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"--chain: {exc}") from None
    if any(p is None for p in chain.phis.values()):
        raise UsageError("--chain: the chain file needs a 'phi' entry for every rank")
    report = check_family(chain)
    out = report.to_dict()
    out["family"] = chain.family.value
    out["ranks"] = list(chain.ranks)
    if report.admissible["N"]:
        out["inversion_constants"] = {str(n): inversion_constant(chain, n) for n in chain.ranks}
    return out, report.passed


def cmd_verify_numeric(args):
    from .heisenberg_numeric import (
        TOLERANCES,
        QuadratureConfig,
        SchroedingerModel,
        coefficient_norm_check,
        inversion_check,
        public,
    )

    _need(args, "case")
    tol = args.tol if args.tol is not None else (1e-6 if args.case == "h3-norm" else TOLERANCES[args.case])
    try:
        cfg = QuadratureConfig(n=args.grid or 161, tol=tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        if args.case == "h3-norm":
            r = coefficient_norm_check(SchroedingerModel(1.0, [1.0], [1.0]), cfg)
            out = {"case": args.case, "lhs": r["numeric"], "rhs": r["predicted"], "rel_err": r["rel_err"],
                   "grid": r["grid"], "runtime_ms": r["runtime_ms"]}
        else:
            r = public(inversion_check(args.case, config=cfg))
            out = {k: r[k] for k in ("case", "lhs", "rhs", "rel_err", "grid", "runtime_ms")}
    except QuadratureFailure as exc:
        return {"case": args.case, "error": str(exc)}, False
    out["tol"] = tol
    return out, out["rel_err"] <= tol


def cmd_sweep(args):
    _need(args, "family", "rank")
    result = run_sweep(args.family, args.rank)
    return result, result["all_pass"]


HANDLERS = {
    "roots": cmd_roots,
    "cascade": cmd_cascade,
    "decompose": cmd_decompose,
    "verify": cmd_verify,
    "density": cmd_density,
    "chain": cmd_chain,
    "verify-numeric": cmd_verify_numeric,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stepwise",
        description="Layer decompositions, Plancherel densities and checks for parabolic nilradicals.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", choices=[f.value for f in Family])
    common.add_argument("--rank", type=int)
    common.add_argument("--phi", help="comma-separated simple-root indices, e.g. 1,4,5 (empty for none)")
    common.add_argument("--chain", help="chain spec JSON file")
    common.add_argument("--tol", type=float)
    common.add_argument("--grid", type=int, help="quadrature points per axis")
    common.add_argument("--case", choices=["h3", "a3", "h3-norm"])
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload, ok = HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"stepwise {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except StepwiseError as exc:
        if isinstance(exc, ValueError):
            # invalid ranks, unknown roots and similar bad input
            print(f"stepwise {args.command}: error: {exc}", file=sys.stderr)
            return 2
        emit({"error": f"{type(exc).__name__}: {exc}"}, args.format, args.out)
        return 1
    emit(payload, args.format, args.out)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
