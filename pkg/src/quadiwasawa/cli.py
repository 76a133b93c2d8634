"""``quadiwasawa`` command line: field reports, scans, stats, knot and Chevalley calculators.

Exit codes: 0 success, 2 when some verdict is Undetermined, 1 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .abelian import FinAbGroup, GroupHom, MalformedHom, knot_group
from .invariants import DEFAULT_M_MAX, ChevalleyInput, InconsistentInput, chevalley_ambiguous
from .logclass import DEFAULT_PRECISION, cl_prime
from .padic import check_ell
from .quadfield.field import FieldDesc, fundamental_discriminants
from .quadfield.ideals import class_group_data
from .records import (
    INCONSISTENT,
    CacheConflict,
    ResultCache,
    compute_record,
    read_records,
    split_tasks,
    write_records,
)
from .verdicts import (
    ConsistencyError,
    HypothesisError,
    Reports,
    Status,
    verdict_C_infty,
    verdict_C_prime_infty,
    verdict_C_Z,
)
from . import verify

EXIT_OK, EXIT_ERROR, EXIT_UNDETERMINED = 0, 1, 2


class UsageError(ValueError):
    pass


def _parse_ells(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(p for p in range(int(lo), int(hi) + 1) if _is_odd_prime(p))
        elif part:
            out.append(check_ell(int(part)))
    if not out:
        raise UsageError("empty ell set")
    return sorted(set(out))


def _is_odd_prime(p: int) -> bool:
    try:
        check_ell(p)
    except ValueError:
        return False
    return True


def _check_precision(args) -> None:
    if args.precision < 2:
        raise UsageError("precision must be >= 2")
    if args.m_max < 3:
        raise UsageError("--m-max must be >= 3")


# -- field -------------------------------------------------------------------------------


def field_report(disc: int, ell: int, m: int, m_max: int) -> tuple[dict, int]:
    reports = Reports.compute(disc, ell, m, m_max)
    status = EXIT_OK
    verdicts = {
        "C_infty": verdict_C_infty(disc, ell, reports).to_dict(),
        "C_prime_infty": verdict_C_prime_infty(disc, ell, reports.wcl).to_dict(),
    }
    try:
        verdicts["C_Z"] = verdict_C_Z(disc, ell, reports).to_dict()
    except ConsistencyError as exc:
        verdicts["C_Z"] = {"target": "C_Z", "status": INCONSISTENT, "error": str(exc)}
        status = EXIT_ERROR
    r = reports.rationality
    report = {
        "delta": disc,
        "ell": ell,
        "split": True,
        "signature": list(FieldDesc(disc).signature),
        "h": class_group_data(disc).order,
        "Cl": str(class_group_data(disc).structure()),
        "h_ell": reports.cl_ell.order,
        "Cl_prime": str(cl_prime(disc, ell)),
        "wCl": str(reports.wcl.group),
        "wCl_stabilized": reports.wcl.stabilized,
        "precision": m,
        "rank": r.rank,
        "T_K": str(r.torsion),
        "rational": r.is_rational if r.stabilized else None,
        "rationality_window": list(r.window),
        "rationality_stabilized": r.stabilized,
        "verdicts": verdicts,
    }
    if status == EXIT_OK and any(v["status"] == Status.UNDETERMINED.value for v in verdicts.values()):
        status = EXIT_UNDETERMINED
    return report, status


def cmd_field(args) -> int:
    _check_precision(args)
    report, status = field_report(args.discriminant, args.ell, args.precision, args.m_max)
    if args.json:
        print(json.dumps(report, sort_keys=True))
        return status
    for k in ("delta", "ell", "split", "h", "Cl", "h_ell", "Cl_prime", "wCl", "wCl_stabilized",
              "rank", "T_K", "rational", "rationality_window"):
        v = report[k]
        if isinstance(v, bool):
            v = str(v).lower()
        print(f"{k:>20}: {v}")
    for name, v in report["verdicts"].items():
        tags = ",".join(v.get("tags", [])) or v.get("error", "-")
        print(f"{name:>20}: {v['status']}  [{tags}]")
    return status


# -- scan --------------------------------------------------------------------------------


def _scan_order(rec) -> tuple:
    return (abs(rec.delta), rec.delta > 0, rec.ell)


def run_scan(discs, ells, m: int, m_max: int, cache: ResultCache, jobs: int = 1) -> list:
    tasks = split_tasks(discs, ells, m, m_max)
    todo = [t for t in tasks if cache.get(t) is None]
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            fresh = list(pool.map(compute_record, todo, chunksize=max(1, len(todo) // (4 * jobs))))
    else:
        fresh = [compute_record(t) for t in todo]
    # single writer: all appends happen here, in task order
    for rec in fresh:
        cache.add(rec)
    return [cache.get(t) for t in tasks]


def cmd_scan(args) -> int:
    _check_precision(args)
    if args.d_min > args.d_max:
        raise UsageError("--d-min exceeds --d-max")
    ells = _parse_ells(args.ell_set) if args.ell_set else [check_ell(args.ell)] if args.ell else None
    if ells is None:
        raise UsageError("give --ell-set or -l")
    discs = fundamental_discriminants(args.d_min, args.d_max)
    cache = ResultCache(args.cache)
    records = run_scan(discs, ells, args.precision, args.m_max, cache, args.jobs)
    if args.sort:
        records.sort(key=_scan_order)
    write_records(records, args.format, sys.stdout)
    return EXIT_OK


# -- stats -------------------------------------------------------------------------------


def _frac(a: int, b: int) -> str:
    return f"{a}/{b} ({float(Fraction(a, b)):.3f})"


def stats_table(records) -> list[dict]:
    if not records:
        raise UsageError("no records to summarize")
    groups = defaultdict(list)
    for r in records:
        groups[r.ell].append(r)
    rows = []
    for ell in sorted(groups) + ["all"]:
        rs = records if ell == "all" else groups[ell]
        n = len(rs)
        rows.append({
            "ell": ell,
            "n": n,
            "rational": sum(r.rational is True for r in rs),
            "wcl_trivial": sum(not r.wcl for r in rs),
            "C_Z_trivial": sum(r.v_C_Z == Status.TRIVIAL.value for r in rs),
            "undetermined": sum(Status.UNDETERMINED.value in (r.v_C_infty, r.v_Cprime, r.v_C_Z) for r in rs),
            "inconsistent": sum(r.v_C_Z == INCONSISTENT for r in rs),
        })
    return rows


def cmd_stats(args) -> int:
    records = []
    for path in args.inputs:
        records.extend(read_records(Path(path).read_text(encoding="utf-8"), args.precision, args.m_max))
    if args.cache:
        records.extend(ResultCache(args.cache).records.values())
    rows = stats_table(records)
    print(f"{'ell':>5} {'n':>6} {'rational':>18} {'wCl=1':>18} {'C_Z=1':>18} {'undet':>6} {'incons':>6}")
    for row in rows:
        n = row["n"]
        print(
            f"{row['ell']!s:>5} {n:>6} {_frac(row['rational'], n):>18} {_frac(row['wcl_trivial'], n):>18}"
            f" {_frac(row['C_Z_trivial'], n):>18} {row['undetermined']:>6} {row['inconsistent']:>6}"
        )
    return EXIT_OK


# -- knot --------------------------------------------------------------------------------


class KnotParseError(ValueError):
    pass


def _ints(text: str, lineno: int) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise KnotParseError(f"line {lineno}: expected comma-separated integers, got {text!r}") from exc


def parse_knot_file(text: str) -> tuple[FinAbGroup, list[GroupHom]]:
    """Parse ``G: d1,d2,...`` then ``D: n1,n2 | x1,x2,... ; y1,y2,...`` lines.

    Each ``D`` line gives the orders of a decomposition group and the images
    of its generators in the coordinates of ``G``.  ``#`` starts a comment.
    """
    g = None
    homs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, body = line.partition(":")
        if not sep:
            raise KnotParseError(f"line {lineno}: missing ':'")
        head = head.strip().upper()
        if head == "G":
            if g is not None:
                raise KnotParseError(f"line {lineno}: G given twice")
            orders = _ints(body, lineno)
            if any(d < 2 for d in orders):
                raise KnotParseError(f"line {lineno}: cyclic orders must be >= 2")
            g = FinAbGroup(tuple(orders))
            if g.invariant_factors != tuple(orders):
                raise KnotParseError(f"line {lineno}: G must be in invariant-factor form, e.g. {g.invariant_factors}")
        elif head == "D":
            if g is None:
                raise KnotParseError(f"line {lineno}: D before G")
            dom_text, bar, img_text = body.partition("|")
            if not bar:
                raise KnotParseError(f"line {lineno}: expected 'orders | images'")
            dom = _ints(dom_text, lineno)
            images = [_ints(part, lineno) for part in img_text.split(";")]
            if len(images) != len(dom) or any(len(v) != g.rank for v in images):
                raise KnotParseError(f"line {lineno}: need {len(dom)} images of length {g.rank}")
            try:
                homs.append(GroupHom.from_images(FinAbGroup(tuple(dom)), g, images).validate())
            except (MalformedHom, ValueError) as exc:
                raise KnotParseError(f"line {lineno}: {exc}") from exc
            if FinAbGroup(tuple(dom)).invariant_factors != tuple(dom):
                raise KnotParseError(f"line {lineno}: decomposition orders must be in invariant-factor form")
        else:
            raise KnotParseError(f"line {lineno}: unknown record {head!r}")
    if g is None:
        raise KnotParseError("no G line")
    return g, homs


def cmd_knot(args) -> int:
    g, homs = parse_knot_file(Path(args.file).read_text(encoding="utf-8"))
    print(knot_group(g, homs))
    return EXIT_OK


# -- chevalley ---------------------------------------------------------------------------


def cmd_chevalley(args) -> int:
    ram = tuple(_ints(args.ramification, 0)) if args.ramification else ()
    print(chevalley_ambiguous(ChevalleyInput(args.class_number, args.degree, ram, args.unit_index)))
    return EXIT_OK


# -- verify ------------------------------------------------------------------------------


def verify_cache(path: str, samples: int = 5) -> verify.CheckResult:
    try:
        cache = ResultCache(path)
    except CacheConflict as exc:
        return verify.CheckResult("cache integrity", False, str(exc))
    recs = sorted(cache.records.values(), key=_scan_order)[:samples]
    bad = [r.key for r in recs if compute_record(r.key).content() != r.content()]
    return verify.CheckResult("cache integrity", not bad, f"{len(cache.records)} records, {len(bad)} recomputation mismatches", bad)


def cmd_verify(args) -> int:
    results = []
    if args.cache:
        res = verify_cache(args.cache)
        print(res.line())
        results.append(res)
    if not args.cache_only:
        results += verify.run_all(quick=args.quick)
    return EXIT_OK if all(r.passed for r in results) else EXIT_ERROR


# -- parser ------------------------------------------------------------------------------


def _add_precision(p: argparse.ArgumentParser) -> None:
    p.add_argument("-m", "--precision", type=int, default=DEFAULT_PRECISION, help="wCl precision ell^m")
    p.add_argument("--m-max", type=int, default=DEFAULT_M_MAX, help="largest ray-class level for ell-rationality")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quadiwasawa", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", help="invariants and verdicts for one (disc, ell)")
    p.add_argument("-d", "--discriminant", type=int, required=True)
    p.add_argument("-l", "--ell", type=int, required=True)
    _add_precision(p)
    p.add_argument("--json", action="store_true", help="print the report as one JSON object")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("scan", help="sweep fundamental discriminants and split primes")
    p.add_argument("--d-min", type=int, required=True)
    p.add_argument("--d-max", type=int, required=True)
    p.add_argument("--ell-set", help="comma list and ranges of odd primes, e.g. 3,5,7 or 3-13")
    p.add_argument("-l", "--ell", type=int)
    _add_precision(p)
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--cache", help="append-only JSONL result cache")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--sort", action="store_true", help="order records by (|disc|, sign, ell)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("stats", help="frequencies over scan output")
    p.add_argument("inputs", nargs="*", help="CSV or JSONL scan output")
    p.add_argument("--cache")
    _add_precision(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("knot", help="knot group from a G/D description file")
    p.add_argument("file")
    p.set_defaults(func=cmd_knot)

    p = sub.add_parser("chevalley", help="ambiguous class number of a cyclic extension", add_help=False)
    p.add_argument("--help", action="help", help="show this help message and exit")
    p.add_argument("-h", "--class-number", type=int, required=True)
    p.add_argument("-n", "--degree", type=int, required=True)
    p.add_argument("-e", "--ramification", help="comma list of ramification indices")
    p.add_argument("-u", "--unit-index", type=int, default=1)
    p.set_defaults(func=cmd_chevalley)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--quick", action="store_true", help="small sweeps only")
    p.add_argument("--cache", help="also check a result cache for conflicts and stale records")
    p.add_argument("--cache-only", action="store_true", help="only check the cache")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HypothesisError as exc:
        print(f"error: hypothesis violated: {exc}", file=sys.stderr)
    except (UsageError, CacheConflict, ConsistencyError, KnotParseError, InconsistentInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
