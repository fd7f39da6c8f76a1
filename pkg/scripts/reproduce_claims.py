"""Re-evaluate every catalogued claim and write a timing-stripped report.

    python3 scripts/reproduce_claims.py --out results/claims.json
"""

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from permbases import claims
from permbases.measures import SearchBudget
from permbases.report import dumps, report_document, strip_timing, write_atomic


@dataclass
class Config:
    out: Path = Path("results/claims.json")
    only: str | None = None
    time_limit: float | None = None


def run(cfg: Config) -> int:
    selected = claims.select(claims.CLAIMS, cfg.only.split(",") if cfg.only else None)
    results = claims.run_claims(selected, SearchBudget(time_limit=cfg.time_limit))
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.claim.id:<28} {r.computed!r}")
    doc = strip_timing(report_document("verify-paper", [r.to_dict() for r in results]))
    write_atomic(cfg.out, dumps(doc))
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} pass; report at {cfg.out}")
    return 1 if failed else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Config.out)
    ap.add_argument("--only")
    ap.add_argument("--time-limit", type=float)
    a = ap.parse_args()
    sys.exit(run(Config(a.out, a.only, a.time_limit)))
