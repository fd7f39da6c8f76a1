"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -s`` (or ``python3 tests/test_acceptance.py``)
to see the lines.
"""

import os
import random
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import pytest

import oracles
from permbases.catalog import (
    builtin_catalog,
    closed_dprime_Sn,
    closed_l_Sn,
    fano_incidence_rep,
    make_alternating,
    make_psl27,
    make_quaternion8,
    make_symmetric,
    matches_incidence_pattern,
    quaternion_element,
)
from permbases.lattice import get_lattice, longest_chain
from permbases.measures import (
    b1,
    b2,
    b3,
    chain_to_irredundant_base,
    compute,
    d,
    d_prime,
    is_base,
    is_irredundant,
    is_minimal_base,
    max_minimal_base,
    min_base,
    mu,
    mu_prime,
)
from permbases.rep import coset_action, coset_union
from permbases.report import dumps, loads, strip_timing
from permbases.semilattice import (
    JoinFamily,
    MeetFamily,
    exists_lattice_embedding,
    independent_set_to_join,
    is_independent,
    join_to_independent_set,
    join_to_meet,
    max_boolean_join,
    max_boolean_meet,
    meet_to_join,
    meet_to_minimal_base,
    minimal_base_to_meet,
    verify_join_embedding,
    verify_meet_embedding,
)
from permbases.perm import parse_cycles

ROOT = Path(__file__).resolve().parents[1]
MIN = 60.0

# witnesses gathered by criteria 1-8, replayed by criterion 9
WITNESSES: dict[str, list] = {"chains": [], "minimal": [], "meet": [], "join": [], "independent": []}


def _line(n, ok, text, elapsed):
    msg = f"[{'PASS' if ok else 'FAIL'}] AC{n:<2} {text}  ({elapsed:.1f}s)"
    capman = _CAPTURE.get("capsys")
    if capman is not None:
        with capman.disabled():
            print(msg)
    else:
        print(msg)
    return msg


_CAPTURE: dict = {}


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    _CAPTURE["capsys"] = capsys
    yield
    _CAPTURE.pop("capsys", None)


def _check(n, text, body, limit_s):
    t0 = time.perf_counter()
    ok, detail = body()
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed <= limit_s
    _line(n, ok, f"{text}: {detail}" + ("" if elapsed <= limit_s else f" [over {limit_s:.0f}s]"), elapsed)
    assert ok, detail


def _collect_group_witnesses(G):
    L = get_lattice(G)
    value, chain = longest_chain(L)
    WITNESSES["chains"].append((G, [L.subgroup(i) for i in chain.nodes], value))
    meet = max_boolean_meet(G, require_normal_min=True)
    if meet.n:
        WITNESSES["meet"].append((G, meet.family))
    join = max_boolean_join(G)
    WITNESSES["join"].append((G, join.family))
    mp = mu_prime(G)
    elems = [parse_cycles(s, G.degree) for s in mp.witness["elements"]]
    WITNESSES["independent"].append((G, elems))


# -- 1 ------------------------------------------------------------------------

def test_ac01_psl27_triple():
    def body():
        G = make_psl27()
        vals = [b1(G).value, b2(G).value, b3(G).value]
        _collect_group_witnesses(G)
        return vals == [5, 4, 3], f"(b1, b2, b3) = {tuple(vals)}, expected (5, 4, 3)"

    _check(1, "PSL(2,7) base measures", body, 10 * MIN)


# -- 2 ------------------------------------------------------------------------

def test_ac02_fano_and_transitive():
    def body():
        rep = fano_incidence_rep()
        r = max_minimal_base(rep)
        pts = [rep.point_from_label(s) for s in r.witness["base"]]
        pattern = matches_incidence_pattern(pts) and is_minimal_base(rep, pts)
        WITNESSES["minimal"].append((rep, pts))
        G = rep.group
        L = get_lattice(G)
        worst = 0
        for c in L.class_reps:
            t = coset_action(G, L.subgroup(c))
            v = max_minimal_base(t)
            worst = max(worst, v.value)
            if v.value:
                WITNESSES["minimal"].append((t, [t.point_from_label(s) for s in v.witness["base"]]))
        ok = r.value == 4 and r.exhaustive and pattern and worst <= 3
        return ok, (f"degree-14 max minimal base {r.value} with base {r.witness['base']} "
                    f"(pattern {'ok' if pattern else 'violated'}); transitive max {worst} <= 3")

    _check(2, "Fano incidence and transitive minimal bases", body, 10 * MIN)


# -- 3 ------------------------------------------------------------------------

def test_ac03_longest_chain_Sn():
    def body():
        got = {}
        for n in range(2, 7):
            G = make_symmetric(n)
            value, chain = longest_chain(get_lattice(G))
            got[n] = (value, closed_l_Sn(n))
        ok = all(a == b for a, b in got.values())
        return ok, "l(S_n) vs closed form: " + ", ".join(f"n={n}: {a}/{b}" for n, (a, b) in got.items())

    _check(3, "longest chains of S_n", body, 15 * MIN)


# -- 4 ------------------------------------------------------------------------

def test_ac04_b2_b3_Sn():
    def body():
        got = {}
        for n in range(2, 6):
            G = make_symmetric(n)
            r2, r3 = b2(G), b3(G)
            got[n] = (r2.value, r3.value, r2.exhaustive and r3.exhaustive)
        ok = all(v2 == v3 == n - 1 and ex for n, (v2, v3, ex) in got.items())
        return ok, "(b2, b3): " + ", ".join(f"S{n}={v2},{v3}" for n, (v2, v3, _) in got.items())

    _check(4, "b2(S_n) = b3(S_n) = n - 1", body, 20 * MIN)


# -- 5 ------------------------------------------------------------------------

def test_ac05_generation_Sn():
    def body():
        mus = {n: (mu(make_symmetric(n)).value, mu_prime(make_symmetric(n)).value) for n in range(2, 6)}
        ds = {n: d(make_symmetric(n)).value for n in range(3, 7)}
        ok = all(a == b == n - 1 for n, (a, b) in mus.items()) and all(v == 2 for v in ds.values())
        return ok, (f"(mu, mu') = {mus}; d = {ds}")

    _check(5, "mu, mu' and d of S_n", body, 10 * MIN)


# -- 6 ------------------------------------------------------------------------

def test_ac06_dprime_Sn():
    def body():
        got = {n: (d_prime(make_symmetric(n)).value, closed_dprime_Sn(n)) for n in (4, 5, 6)}
        return all(a == b for a, b in got.values()), f"d'(S_n) vs floor(n/2): {got}"

    _check(6, "d'(S_n)", body, 15 * MIN)


# -- 7 ------------------------------------------------------------------------

def test_ac07_quaternion():
    def body():
        Q = make_quaternion8()
        fam = [Q.subgroup([quaternion_element("i")]), Q.subgroup([quaternion_element("j")])]
        meet_ok = verify_meet_embedding(Q, fam)
        join_ok = verify_join_embedding(Q, fam)
        lat = exists_lattice_embedding(Q, 2)
        WITNESSES["meet"].append((Q, fam))
        WITNESSES["join"].append((Q, fam))
        ok = meet_ok and join_ok and lat.n == 0 and lat.exhaustive
        return ok, f"meet {meet_ok}, join {join_ok}, lattice embedding {lat.n == 2}"

    _check(7, "Q8 and B(2)", body, 1 * MIN)


# -- 8 ------------------------------------------------------------------------

def _property_groups():
    groups = [s.build() for s in builtin_catalog(200)]
    return groups + [make_symmetric(6)]


def test_ac08_property_suite():
    def body():
        violations = []
        inexact = []
        for G in _property_groups():
            r = {inv: compute(G, inv) for inv in ("b1", "b2", "b3", "l", "d", "mu", "muprime")}
            v = {k: x.value for k, x in r.items()}
            inexact += [f"{G.name}:{k}" for k, x in r.items() if not x.exhaustive]
            checks = {
                "b3<=b2<=b1": v["b3"] <= v["b2"] <= v["b1"],
                "b1=l": v["b1"] == v["l"],
                "b2<=mu'": v["b2"] <= v["muprime"],
                "d<=mu<=mu'<=l": v["d"] <= v["mu"] <= v["muprime"] <= v["l"],
            }
            violations += [f"{G.name}:{k}" for k, ok in checks.items() if not ok]
            _collect_group_witnesses(G)
        n = len(_property_groups())
        ok = not violations and not inexact
        return ok, f"{n} groups, {len(violations)} violations {violations}, inexact {inexact}"

    _check(8, "measure and generation inequalities", body, 30 * MIN)


# -- 9 ------------------------------------------------------------------------

def test_ac09_round_trips():
    def body():
        if not WITNESSES["chains"]:
            for G in _property_groups():
                _collect_group_witnesses(G)
            rep = fano_incidence_rep()
            r = max_minimal_base(rep)
            WITNESSES["minimal"].append((rep, [rep.point_from_label(s) for s in r.witness["base"]]))
        failures = []
        count = 0
        for G, chain, value in WITNESSES["chains"]:
            rep, base = chain_to_irredundant_base(G, chain)
            count += 1
            if not (len(base) == value and is_irredundant(rep, base.points) and is_base(rep, base.points)):
                failures.append(f"chain {G.name}")
        for rep, pts in WITNESSES["minimal"]:
            fam = minimal_base_to_meet(rep, pts)
            rep2, base2 = meet_to_minimal_base(rep.group, fam)
            count += 1
            if not (fam.n == len(pts) and is_minimal_base(rep2, base2.points)
                    and rep2.kernel_mask == rep.kernel_mask):
                failures.append(f"minimal {rep!r}")
        for G, fam in WITNESSES["meet"]:
            rep, base = meet_to_minimal_base(G, fam)
            back = minimal_base_to_meet(rep, base)
            join = meet_to_join(MeetFamily(G, fam))
            count += 1
            if not (back.n == len(fam) == join.n and verify_join_embedding(G, join)):
                failures.append(f"meet {G.name}")
        for G, fam in WITNESSES["join"]:
            jf = JoinFamily(G, fam)
            meet = join_to_meet(jf)
            elems = join_to_independent_set(G, jf)
            count += 1
            if not (meet.n == len(fam) == len(elems) and verify_meet_embedding(G, meet)
                    and is_independent(G, elems) and meet_to_join(meet).n == len(fam)):
                failures.append(f"join {G.name}")
        for G, elems in WITNESSES["independent"]:
            count += 1
            if elems:
                jf = independent_set_to_join(G, elems)
                if not (jf.n == len(elems) and len(join_to_independent_set(G, jf)) == len(elems)):
                    failures.append(f"independent {G.name}")
        return not failures, f"{count} witnesses replayed, failures {failures}"

    _check(9, "constructive round trips", body, 30 * MIN)


# -- 10 -----------------------------------------------------------------------

def test_ac10_oracles():
    def body():
        bad = []
        small = [s.build() for s in builtin_catalog(48)]
        for G in small:
            elems = oracles.closure([g.array for g in G.generators], G.degree)
            L = get_lattice(G)
            got = {frozenset(L.table.arrays[i] for i in n.elems) for n in L.nodes}
            if got != oracles.all_subgroups(elems, G.degree):
                bad.append(f"lattice {G.name}")
        chain_groups = [s.build() for s in builtin_catalog(2000)] + [make_symmetric(6), make_alternating(6)]
        for G in chain_groups:
            if G.order != len(oracles.closure([g.array for g in G.generators], G.degree)):
                bad.append(f"order {G.name}")
        dup = 0
        rng = random.Random(2024)
        for G in (make_symmetric(4), make_psl27(), make_alternating(5), make_quaternion8()):
            L = get_lattice(G)
            reps = [r for r in L.class_reps if r != L.top]
            for _ in range(12):
                picks = rng.sample(reps, min(2, len(reps)))
                subs = [L.subgroup(r) for r in picks]
                k = rng.randrange(len(subs))
                doubled = subs + [subs[k]]
                if sum(G.order // H.order for H in doubled) > 20:
                    continue
                a, b = coset_union(G, subs), coset_union(G, doubled)
                dup += 1
                if (min_base(a).value != min_base(b).value
                        or max_minimal_base(a).value != max_minimal_base(b).value):
                    bad.append(f"duplicate {G.name}")
        return not bad, (f"{len(small)} lattices, {len(chain_groups)} chain orders, "
                         f"{dup} duplicate-orbit fixtures; mismatches {bad}")

    _check(10, "oracle equivalence", body, 30 * MIN)


# -- 11 -----------------------------------------------------------------------

def _verify_run(path, seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    env.pop("PERMBASES_CACHE_DIR", None)
    proc = subprocess.run([sys.executable, "-m", "permbases", "verify-paper", "--report", str(path)],
                          capture_output=True, text=True, env=env, cwd=ROOT)
    return proc.returncode


def test_ac11_determinism():
    def body():
        with tempfile.TemporaryDirectory() as tmp:
            a, b = Path(tmp) / "a.json", Path(tmp) / "b.json"
            codes = (_verify_run(a, 1), _verify_run(b, 2))
            da = dumps(strip_timing(loads(a.read_text())))
            db = dumps(strip_timing(loads(b.read_text())))
        same = da.encode() == db.encode()
        return codes == (0, 0) and same, f"exit codes {codes}, reports identical without timing: {same}"

    _check(11, "verify-paper determinism", body, 30 * MIN)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-s", "-q", "-p", "no:cacheprovider"]))
