"""Tabulate every invariant over the built-in catalog and check the ordering relations.

    python3 scripts/invariant_table.py --max-order 120 --csv results/invariants.csv
"""

import argparse
import csv
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from permbases.catalog import builtin_catalog
from permbases.measures import INVARIANTS, compute

COLUMNS = ["b1", "b2", "b3", "l", "d", "dprime", "mu", "muprime"]


@dataclass
class Config:
    max_order: int = 120
    csv_path: Path | None = None


def relations(v: dict) -> list[str]:
    bad = []
    if not v["b3"] <= v["b2"] <= v["b1"]:
        bad.append("b3<=b2<=b1")
    if v["b1"] != v["l"]:
        bad.append("b1=l")
    if v["b2"] > v["muprime"]:
        bad.append("b2<=mu'")
    if not v["d"] <= v["mu"] <= v["muprime"] <= v["l"]:
        bad.append("d<=mu<=mu'<=l")
    return bad


def run(cfg: Config) -> int:
    assert set(COLUMNS) <= set(INVARIANTS)
    rows = []
    print(f"{'group':<7} {'order':>5} " + " ".join(f"{c:>7}" for c in COLUMNS) + "  secs")
    for spec in builtin_catalog(cfg.max_order):
        G = spec.build()
        t0 = time.perf_counter()
        v = {c: compute(G, c).value for c in COLUMNS}
        bad = relations(v)
        rows.append({"group": spec.name, "order": G.order, **v, "violations": ";".join(bad)})
        print(f"{spec.name:<7} {G.order:>5} " + " ".join(f"{v[c]:>7}" for c in COLUMNS)
              + f"  {time.perf_counter() - t0:.1f}" + (f"  VIOLATES {bad}" if bad else ""))
    if cfg.csv_path:
        cfg.csv_path.parent.mkdir(parents=True, exist_ok=True)
        with open(cfg.csv_path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 1 if any(r["violations"] for r in rows) else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=Config.max_order)
    ap.add_argument("--csv", type=Path)
    a = ap.parse_args()
    sys.exit(run(Config(a.max_order, a.csv)))
