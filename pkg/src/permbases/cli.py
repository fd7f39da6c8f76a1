"""Command line: ``compute``, ``verify-paper``, ``lattice`` and ``hunt``.

Exit codes: 0 ok, 1 claim mismatch, 2 inexact (a budget was hit), 64 usage
error, 70 internal assertion failure.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
import time
from pathlib import Path

from . import claims as claims_mod
from .catalog import UnknownGroupError, builtin_catalog, parse_group_spec
from .group import BudgetError, PermGroup
from .lattice import LatticeFormatError, enumerate_subgroups, hasse_dot, load_lattice, save_lattice
from .measures import INVARIANTS, SearchBudget, compute
from .report import dumps, report_document, write_atomic
from .semilattice import hunt_gap

EXIT_OK, EXIT_MISMATCH, EXIT_INEXACT, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 64, 70
CACHE_ENV = "PERMBASES_CACHE_DIR"


class UsageError(Exception):
    pass


def _budget(args) -> SearchBudget:
    try:
        return SearchBudget(max_orbits=args.max_orbits, max_degree=args.max_degree,
                            max_classes=args.max_classes, time_limit=args.time_limit)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _add_budget_flags(p):
    p.add_argument("--max-orbits", type=int, default=3)
    p.add_argument("--max-degree", type=int, default=400)
    p.add_argument("--max-classes", type=int, default=None)
    p.add_argument("--time-limit", type=float, default=None, help="seconds per search")


def _cache_path(cache_dir, spec_text: str) -> Path | None:
    cache_dir = cache_dir or os.environ.get(CACHE_ENV)
    if not cache_dir:
        return None
    key = re.sub(r"[^A-Za-z0-9_.-]+", "_", spec_text)
    return Path(cache_dir) / f"{key}.lattice.json"


def _group(spec_text: str) -> PermGroup:
    try:
        spec = parse_group_spec(spec_text)
        return spec.build()
    except UnknownGroupError as exc:
        raise UsageError(str(exc)) from exc
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot build group {spec_text!r}: {exc}") from exc


def _attach_lattice(G: PermGroup, spec_text: str, cache_dir) -> None:
    path = _cache_path(cache_dir, spec_text)
    if path is None:
        return
    if path.exists():
        try:
            G.__dict__["_lattice"] = load_lattice(path, G)
            return
        except LatticeFormatError:
            pass
    L = enumerate_subgroups(G)
    G.__dict__["_lattice"] = L
    save_lattice(L, path, spec_text)


def cmd_compute(args) -> int:
    invs = [s.strip() for s in args.invariants.split(",") if s.strip()]
    bad = [s for s in invs if s not in INVARIANTS]
    if bad or not invs:
        raise UsageError(f"unknown invariants {bad}; choose from {','.join(INVARIANTS)}")
    G = _group(args.group)
    budget = _budget(args)
    if G.order > 1:
        _attach_lattice(G, args.group, args.cache_dir)
    reports = [compute(G, inv, budget) for inv in invs]
    doc = report_document("compute", [r.to_dict() for r in reports], group=args.group)
    if args.json:
        sys.stdout.write(dumps(doc))
    else:
        print(f"{'group':<10} {'invariant':<10} {'value':>5}  exhaustive  ms")
        for r in reports:
            print(f"{args.group:<10} {r.invariant:<10} {r.value:>5}  {str(r.exhaustive):<10}  "
                  f"{r.elapsed_ms:.1f}")
    if args.report:
        write_atomic(args.report, dumps(doc))
    return EXIT_OK if all(r.exhaustive for r in reports) else EXIT_INEXACT


def cmd_verify(args) -> int:
    only = [s.strip() for s in args.only.split(",")] if args.only else None
    selected = claims_mod.select(claims_mod.CLAIMS, only)
    if not selected:
        raise UsageError(f"no claims match {args.only!r}")
    t0 = time.perf_counter()
    results = claims_mod.run_claims(selected, _budget(args))
    width = max(len(r.claim.id) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.claim.id:<{width}}  computed={r.computed!r} "
              f"expected {r.claim.comparison} {r.claim.expected!r}  ({r.elapsed_ms / 1000:.2f}s)")
    failed = [r for r in results if not r.passed]
    for r in failed:
        print(f"  mismatch {r.claim.id}: expected {r.claim.expected!r}, computed {r.computed!r}"
              + ("" if r.exhaustive else " (inexact)"), file=sys.stderr)
    print(f"{len(results) - len(failed)}/{len(results)} claims pass "
          f"in {time.perf_counter() - t0:.1f}s")
    if args.report:
        doc = report_document("verify-paper", [r.to_dict() for r in results])
        write_atomic(args.report, dumps(doc))
    return EXIT_OK if not failed else EXIT_MISMATCH


def cmd_lattice(args) -> int:
    if args.load:
        try:
            L = load_lattice(args.load)
        except LatticeFormatError as exc:
            raise UsageError(str(exc)) from exc
    else:
        if not args.group:
            raise UsageError("lattice needs --group or --load")
        G = _group(args.group)
        path = _cache_path(args.cache_dir, args.group)
        if path is not None:
            _attach_lattice(G, args.group, args.cache_dir)
            L = G.__dict__["_lattice"]
        else:
            L = enumerate_subgroups(G)
    print(f"{len(L.nodes)} subgroups, {len(L.class_reps)} classes, {len(L.covers)} covers",
          file=sys.stderr if args.dot == "-" else sys.stdout)
    if args.dot:
        text = hasse_dot(L)
        if args.dot == "-":
            sys.stdout.write(text)
        else:
            write_atomic(args.dot, text)
    if args.save:
        save_lattice(L, args.save, args.group)
    return EXIT_OK


def cmd_hunt(args) -> int:
    specs = builtin_catalog(args.max_order)
    if args.groups:
        wanted = {s.strip().upper() for s in args.groups.split(",")}
        specs = [s for s in specs if s.name.upper() in wanted]
    if not specs:
        raise UsageError("no catalog groups selected")
    budget = _budget(args)
    rows = []
    print(f"{'group':<7} {'order':>5} {'b2':>3} {'mu_prime':>8} {'meet':>5} {'join':>5}  gap   normal_min  exact")
    for spec in specs:
        G = spec.build()
        g = hunt_gap(G, budget)
        row = {"order": G.order, **g.to_dict()}
        rows.append(row)
        flag = "  <== STRICT GAP" if g.strict_gap else ""
        print(f"{g.group:<7} {G.order:>5} {g.b2:>3} {g.mu_prime:>8} {g.meet_max:>5} {g.join_max:>5}  "
              f"{str(g.strict_gap):<5} {str(g.normal_min_achievable):<11} {g.exact}{flag}")
    gaps = [r["group"] for r in rows if r["strict_gap"]]
    unachieved = [r["group"] for r in rows if not r["normal_min_achievable"]]
    print(f"{len(rows)} groups; strict gaps: {', '.join(gaps) or 'none'}; "
          f"meet maximum without normal-minimum witness: {', '.join(unachieved) or 'none'}")
    if args.report:
        write_atomic(args.report, dumps(report_document("hunt", rows, max_order=args.max_order)))
    return EXIT_OK if all(r["exact"] for r in rows) else EXIT_INEXACT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="permbases", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute invariants of one group")
    p.add_argument("--group", required=True)
    p.add_argument("--invariants", required=True, help=f"comma list from {','.join(INVARIANTS)}")
    p.add_argument("--json", action="store_true", help="print the report document")
    p.add_argument("--report", help="also write the report document here")
    p.add_argument("--cache-dir", help=f"lattice cache directory (default ${CACHE_ENV})")
    _add_budget_flags(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify-paper", help="check every recorded claim")
    p.add_argument("--only", help="comma list of claim ids or id prefixes")
    p.add_argument("--report", help="write the report document here")
    _add_budget_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lattice", help="subgroup lattice, DOT export and caching")
    p.add_argument("--group")
    p.add_argument("--load", help="read a saved lattice instead of enumerating")
    p.add_argument("--dot", help="DOT output path, '-' for stdout")
    p.add_argument("--save", help="write the lattice cache file here")
    p.add_argument("--cache-dir")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("hunt", help="look for groups with b2 < mu'")
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--groups", help="restrict to these catalog names")
    p.add_argument("--report")
    _add_budget_flags(p)
    p.set_defaults(func=cmd_hunt)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_INEXACT
    except AssertionError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
