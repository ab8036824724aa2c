"""Command-line front end: ``quadcal cf | profile | verify | scan-conjecture``.

Exit codes: 0 success, 1 theorem counterexample, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .arith import is_discriminant
from .cache import CacheRecord, ProfileCache, compute_record, resolve_cache_path
from .surd import QuadPoly, SurdError, expand, from_poly, make_surd, sqrt_surd, stats
from . import verify as V

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# --- worker plumbing -------------------------------------------------------
# Workers see a read-only snapshot of the cache; whatever they compute is sent
# back with the verdicts and written by the parent process only.

_snapshot: dict[int, CacheRecord] = {}
_fresh: dict[int, CacheRecord] = {}


def _init_worker(snapshot: dict[int, CacheRecord]) -> None:
    global _snapshot, _fresh
    _snapshot, _fresh = snapshot, {}


def _source(D: int) -> CacheRecord:
    rec = _snapshot.get(D) or _fresh.get(D)
    if rec is None:
        rec = _fresh[D] = compute_record(D)
    return rec


def _drain() -> list[CacheRecord]:
    out = list(_fresh.values())
    _fresh.clear()
    return out


def _verify_task(task: tuple) -> tuple[list, list[CacheRecord]]:
    return V.run_task(task, source=_source), _drain()


def _conjecture_task(pair: tuple[int, int]) -> tuple[object, list[CacheRecord]]:
    return V.conjecture_record(*pair, source=_source), _drain()


def _run_pool(fn, items: list, jobs: int, cache: ProfileCache | None) -> list:
    snapshot = cache.snapshot() if cache else {}
    if jobs <= 1:
        _init_worker(snapshot)
        pairs = [fn(item) for item in items]
    else:
        chunk = max(1, len(items) // (jobs * 8))
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(snapshot,)) as ex:
            pairs = list(ex.map(fn, items, chunksize=chunk))
    if cache is not None:
        cache.add(rec for _, fresh in pairs for rec in fresh)
    return [result for result, _ in pairs]


def _open_cache(args) -> ProfileCache | None:
    if getattr(args, "no_cache", False):
        return None
    return ProfileCache(resolve_cache_path(args.cache))


# --- commands ----------------------------------------------------------------

def _parse_surd(args):
    if args.sqrt is not None:
        if args.sqrt <= 0:
            raise UsageError("--sqrt needs a positive integer")
        return sqrt_surd(args.sqrt)
    if args.poly is not None:
        return from_poly(QuadPoly(*args.poly))
    return make_surd(*args.surd)


def cmd_cf(args) -> int:
    try:
        w = _parse_surd(args)
    except (SurdError, UsageError) as exc:
        raise UsageError(str(exc)) from exc
    kind = "minus" if args.minus else "plus"
    e = expand(w, kind)
    st = stats(e)
    if args.json:
        out = {"surd": w.to_json(), "kind": kind, "preperiod": list(e.preperiod),
               "period": list(e.period), "l": st["l"]}
        out.update({"S": st["S"]} if kind == "plus" else {"S_plus": st["S_plus"]})
        print(json.dumps(out))
        return EXIT_OK
    print(f"surd      {w}")
    print(f"preperiod {list(e.preperiod)}")
    print(f"period    {list(e.period)}")
    if kind == "plus":
        print(f"l={st['l']} S={st['S']}")
    else:
        print(f"l+={st['l']} S+={st['S_plus']}")
    return EXIT_OK


def cmd_profile(args) -> int:
    D = args.D
    if not is_discriminant(D):
        raise UsageError(f"{D} is not a valid discriminant")
    cache = _open_cache(args)
    rec = cache.lookup(D) if cache else compute_record(D)
    if args.json:
        print(json.dumps(rec.profile_json()))
        return EXIT_OK
    print(f"D={rec.D} kappa={rec.kappa} kappa_plus={rec.kappa_plus} "
          f"h={rec.h} h_plus={rec.h_plus} norm={rec.unit_norm:+d}")
    print(f"eps_D = ({rec.t} + {rec.u}*sqrt({rec.D}))/2")
    print(f"cycles_plus  {[list(w) for w in rec.cycles_plus]}")
    print(f"cycles_minus {[list(w) for w in rec.cycles_minus]}")
    return EXIT_OK


def _write_out(path: str | None, text: str) -> None:
    if path is None:
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def _records_text(records, header, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in records:
            w.writerow(r.csv_row())
        return buf.getvalue()
    return "".join(json.dumps(r.to_json(), sort_keys=True) + "\n" for r in records)


def cmd_verify(args) -> int:
    if args.theorem_id != "all" and args.theorem_id not in V.ALL_IDS:
        raise UsageError(f"unknown theorem id {args.theorem_id!r}; "
                         f"choose from {', '.join(V.ALL_IDS)}, all")
    ids = V.ALL_IDS if args.theorem_id == "all" else (args.theorem_id,)
    cache = _open_cache(args)
    tasks = V.tasks_for(args.theorem_id, args.max)
    results = _run_pool(_verify_task, tasks, args.jobs, cache)

    by_id: dict[str, list[list]] = {tid: [] for tid in ids}
    for task, recs in zip(tasks, results):
        by_id[task[0]].append(recs)
    records = sorted((r for recs in results for r in recs), key=V.VerdictRecord.sort_key)

    for tid in ids:
        print(f"{tid:10s} {V.summarize(by_id[tid]).line()}")
    for r in records:
        if r.advisory and not r.passed:
            print(f"FLAG {r.theorem_id} p={r.p} D={r.D} predicted={r.predicted_mod4} "
                  f"computed={r.computed} ({r.note})")
    failures = [r for r in records if not r.advisory and not r.passed]
    for r in failures:
        print(f"FAIL {r.theorem_id} params={r.params} D={r.D} "
              f"predicted={r.predicted_mod4} computed={r.computed}")
        print(json.dumps(V.reproduction_bundle(r), sort_keys=True), file=sys.stderr)
    total = V.summarize(results)
    print(f"summary checked/passed/failed/skipped {total.line()} "
          f"flagged {total.flagged}/{total.advisory}")
    _write_out(args.out, _records_text(records, V.VERDICT_CSV_HEADER, args.format))
    return EXIT_COUNTEREXAMPLE if failures else EXIT_OK


def _format_tables(tables) -> list[str]:
    lines = []
    labels = {-1: "norm -1: l((1+sqrt pq)/2) = l((p+sqrt pq)/(2p)) mod 4",
              1: "norm +1: kappa(pq) = 0 mod 4"}
    for norm in (-1, 1):
        t = tables[norm]
        lines.append(f"[{labels[norm]}] vs [x_p*y_q - y_p*x_q < 0]")
        lines.append("                 det<0  det>0")
        for cond in (True, False):
            lines.append(f"  condition {str(cond):5s}  {t[(cond, True)]:5d}  {t[(cond, False)]:5d}")
    return lines


def cmd_scan_conjecture(args) -> int:
    if args.max < 13:
        raise UsageError("--max must be at least 13")
    cache = _open_cache(args)
    pairs = V.conjecture_pairs(args.max)
    records = _run_pool(_conjecture_task, pairs, args.jobs, cache)
    records.sort(key=lambda r: (r.p, r.q))
    text = _records_text(records, V.CONJECTURE_CSV_HEADER, args.format)
    if args.out:
        _write_out(args.out, text)
    else:
        sys.stdout.write(text)
    bad = [r for r in records if not r.passed]
    agree = sum(r.aux_equiv_holds for r in records)
    report = [f"eligible pairs {len(records)}, counterexamples {len(bad)}",
              *(f"COUNTEREXAMPLE p={r.p} q={r.q} kappa_plus={r.kappa_plus} "
                f"predicted={r.predicted_mod4}" for r in bad),
              f"side-condition equivalence holds for {agree}/{len(records)} pairs",
              *_format_tables(V.contingency_tables(records)),
              "note: (1+sqrt(q/p))/2 is evaluated as (p+sqrt(pq))/(2p), its discriminant-pq form"]
    print("\n".join(report), file=sys.stderr if not args.out else sys.stdout)
    for r in bad:
        print(json.dumps({"record": r.to_json(),
                          "bundle": V.reproduction_bundle(
                              V.VerdictRecord("conjecture", {"p": r.p, "q": r.q}, r.p * r.q,
                                              r.predicted_mod4, r.kappa_plus,
                                              r.kappa_plus_mod4, False))},
                         sort_keys=True), file=sys.stderr)
    return EXIT_OK


# --- parser ------------------------------------------------------------------

def _cache_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cache", metavar="PATH",
                   help="profile cache (default $QUADCAL_CACHE or ./quadcal-cache.jsonl)")
    p.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadcal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    cf = sub.add_parser("cf", help="continued fraction of a quadratic irrational")
    which = cf.add_mutually_exclusive_group(required=True)
    which.add_argument("--surd", nargs=3, type=int, metavar=("P", "Q", "D"),
                      help="(P + sqrt D) / Q")
    which.add_argument("--sqrt", type=int, metavar="N", help="sqrt(N) = (0 + sqrt(4N)) / 2")
    which.add_argument("--poly", nargs=3, type=int, metavar=("A", "B", "C"),
                      help="larger root of A w^2 + B w + C")
    cf.add_argument("--minus", action="store_true", help="minus continued fraction")
    cf.add_argument("--json", action="store_true")
    cf.set_defaults(func=cmd_cf)

    pr = sub.add_parser("profile", help="kappa, kappa+, h, h+ and eps_D of a discriminant")
    pr.add_argument("D", type=int)
    pr.add_argument("--json", action="store_true")
    _cache_flags(pr)
    pr.set_defaults(func=cmd_profile)

    ve = sub.add_parser("verify", help="check a theorem over all primes <= --max")
    ve.add_argument("theorem_id", help=f"one of {', '.join(V.ALL_IDS)}, all")
    ve.add_argument("--max", type=int, default=100)
    ve.add_argument("--jobs", type=int, default=1)
    ve.add_argument("--out", metavar="PATH", help="write every verdict record here")
    ve.add_argument("--format", choices=("json", "csv"), default="json")
    _cache_flags(ve)
    ve.set_defaults(func=cmd_verify)

    sc = sub.add_parser("scan-conjecture", help="test the pq conjecture for p < q <= --max")
    sc.add_argument("--max", type=int, default=100)
    sc.add_argument("--jobs", type=int, default=1)
    sc.add_argument("--out", metavar="PATH")
    sc.add_argument("--format", choices=("json", "csv"), default="json")
    _cache_flags(sc)
    sc.set_defaults(func=cmd_scan_conjecture)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"quadcal: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"quadcal: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE
