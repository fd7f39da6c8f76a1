"""Base predicates, exact base searches and the group invariants built on them.

In a representation with kernel ``K`` a sequence is a *base* when its
pointwise stabilizer equals ``K`` (the identity for faithful actions).  All
searches work on point stabilizers as bitmasks over the group's element
table: the pointwise stabilizer of a sequence is the AND of its masks.

Invariants reported here:

* ``b1`` max irredundant base size over all representations (equals ``l``)
* ``b2`` max minimal base size over all representations
* ``b3`` max over representations of the minimum base size
* ``l``, ``d``, ``dprime``, ``mu``, ``muprime``
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from itertools import combinations

from .group import PermGroup
from .lattice import SubgroupLattice, get_lattice, longest_chain
from .perm import format_cycles
from .rep import Representation, coset_union

INVARIANTS = ("b1", "b2", "b3", "l", "d", "dprime", "mu", "muprime")


class SearchTimeout(Exception):
    pass


@dataclass(frozen=True)
class SearchBudget:
    max_orbits: int = 3
    max_degree: int = 400
    max_classes: int | None = None
    time_limit: float | None = None  # seconds, per search

    def __post_init__(self):
        for name in ("max_orbits", "max_degree", "max_classes", "time_limit"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"budget field {name} must be positive")

    def to_dict(self) -> dict:
        return asdict(self)

    def deadline(self) -> "Deadline":
        return Deadline(self.time_limit)


DEFAULT_BUDGET = SearchBudget()


class Deadline:
    """Cooperative wall-clock limit, polled at branch boundaries."""

    def __init__(self, seconds: float | None):
        self.end = None if seconds is None else time.monotonic() + seconds

    def check(self):
        if self.end is not None and time.monotonic() > self.end:
            raise SearchTimeout


@dataclass
class MeasureReport:
    group: str
    invariant: str
    value: int
    witness: dict
    exhaustive: bool = True
    budget: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "invariant": self.invariant,
            "value": self.value,
            "exhaustive": self.exhaustive,
            "witness": self.witness,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "budget": self.budget,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "MeasureReport":
        return cls(doc["group"], doc["invariant"], doc["value"], doc["witness"],
                   doc["exhaustive"], doc.get("budget", {}), doc.get("elapsed_ms", 0.0))


@dataclass
class BaseSequence:
    rep: Representation = field(repr=False)
    points: list[int]

    def __len__(self):
        return len(self.points)

    def labels(self) -> list[str]:
        return [self.rep.label(p) for p in self.points]


def _group_name(G: PermGroup) -> str:
    return G.name or "<" + ", ".join(format_cycles(g) for g in G.generators) + ">"


def _report(G, invariant, value, witness, exhaustive, budget, t0) -> MeasureReport:
    return MeasureReport(_group_name(G), invariant, value, witness, exhaustive,
                         (budget or DEFAULT_BUDGET).to_dict(), (time.perf_counter() - t0) * 1000)


# -- predicates ---------------------------------------------------------------

def _masks(rep: Representation, seq) -> list[int]:
    for p in seq:
        rep.check_point(p)
    return [rep.stab_masks[p - 1] for p in seq]


def _and(masks, start):
    for m in masks:
        start &= m
    return start


def is_base(rep: Representation, seq) -> bool:
    masks = _masks(rep, seq)
    return _and(masks, rep.table.all_mask) == rep.kernel_mask


def is_irredundant(rep: Representation, seq) -> bool:
    """Each point is moved by the pointwise stabilizer of its predecessors."""
    cur = rep.table.all_mask
    for m in _masks(rep, seq):
        nxt = cur & m
        if nxt == cur:
            return False
        cur = nxt
    return True


def is_minimal_base(rep: Representation, seq) -> bool:
    masks = _masks(rep, seq)
    full = rep.table.all_mask
    if _and(masks, full) != rep.kernel_mask:
        return False
    for i in range(len(masks)):
        if _and(masks[:i] + masks[i + 1:], full) == rep.kernel_mask:
            return False
    return True


def greedy_irredundant_base(rep: Representation) -> BaseSequence:
    """Repeatedly take the least point moved by the current stabilizer."""
    cur = rep.table.all_mask
    seq = []
    for p, m in enumerate(rep.stab_masks, start=1):
        if cur == rep.kernel_mask:
            break
        if cur & m != cur:
            seq.append(p)
            cur &= m
    return BaseSequence(rep, seq)


# -- search engine over stabilizer masks ---------------------------------------

class StabilizerSearch:
    """Exact searches over a list of stabilizer masks (one per point).

    Points sharing a stabilizer are interchangeable, so only the least point of
    each distinct mask is branched on.
    """

    def __init__(self, masks: list[int], full: int, target: int, deadline: Deadline | None = None):
        self.full = full
        self.target = target
        self.deadline = deadline or Deadline(None)
        seen = {}
        for p, m in enumerate(masks):
            seen.setdefault(m, p)
        self.distinct = sorted((p, m) for m, p in seen.items())
        self._long: dict[int, int] = {}
        self._short: dict[int, int] = {}

    def _children(self, S):
        out = []
        done = set()
        for p, m in self.distinct:
            c = S & m
            if c != S and c not in done:
                done.add(c)
                out.append((p, c))
        return out

    def longest(self, S: int) -> int:
        """Longest strictly decreasing stabilizer sequence from ``S`` down to the target."""
        hit = self._long.get(S)
        if hit is not None:
            return hit
        self.deadline.check()
        if S == self.target:
            v = 0
        else:
            v = 1 + max(self.longest(c) for _, c in self._children(S))
        self._long[S] = v
        return v

    def shortest(self, S: int) -> int:
        hit = self._short.get(S)
        if hit is not None:
            return hit
        self.deadline.check()
        if S == self.target:
            v = 0
        else:
            v = 1 + min(self.shortest(c) for _, c in self._children(S))
        self._short[S] = v
        return v

    def _trace(self, fn) -> list[int]:
        S, seq = self.full, []
        while S != self.target:
            want = fn(S) - 1
            for p, m in self.distinct:
                c = S & m
                if c != S and fn(c) == want:
                    seq.append(p)
                    S = c
                    break
        return seq

    def longest_sequence(self) -> list[int]:
        self.longest(self.full)
        return self._trace(self.longest)

    def shortest_sequence(self) -> list[int]:
        self.shortest(self.full)
        return self._trace(self.shortest)

    def max_independent(self, first_choices: set[int] | None = None) -> list[int]:
        """Largest set of points whose stabilizer intersection is the target while every
        point is needed.  Independence is hereditary, so the DFS keeps it at every step;
        ``first_choices`` restricts the least point (orbit representatives)."""
        best: list[int] = []
        distinct = self.distinct
        target = self.target

        def dfs(start, chosen, inter, others):
            nonlocal best
            self.deadline.check()
            if inter == target:
                if len(chosen) > len(best):
                    best = list(chosen)
                return
            if len(chosen) + self.longest(inter) <= len(best):
                return
            for pos in range(start, len(distinct)):
                p, m = distinct[pos]
                if not chosen and first_choices is not None and p not in first_choices:
                    continue
                new = inter & m
                if new == inter:
                    continue
                new_others = [o & m for o in others]
                if new in new_others or new == inter:
                    continue
                new_others.append(inter)
                chosen.append(p)
                dfs(pos + 1, chosen, new, new_others)
                chosen.pop()

        if self.full == target:
            return []
        dfs(0, [], self.full, [])
        return best


def _rep_search(rep, budget):
    dl = (budget or DEFAULT_BUDGET).deadline()
    return StabilizerSearch(rep.stab_masks, rep.table.all_mask, rep.kernel_mask, dl)


def _base_witness(rep, seq) -> dict:
    return {"representation": rep.describe(), "base": [rep.label(p) for p in seq]}


def max_irredundant_base(rep: Representation, budget: SearchBudget | None = None) -> MeasureReport:
    t0 = time.perf_counter()
    search = _rep_search(rep, budget)
    try:
        seq = [p + 1 for p in search.longest_sequence()]
        exhaustive = True
    except SearchTimeout:
        seq, exhaustive = greedy_irredundant_base(rep).points, False
    assert is_irredundant(rep, seq) and is_base(rep, seq)
    return _report(rep.group, "max_irredundant_base", len(seq), _base_witness(rep, seq),
                   exhaustive, budget, t0)


def min_base(rep: Representation, budget: SearchBudget | None = None) -> MeasureReport:
    t0 = time.perf_counter()
    search = _rep_search(rep, budget)
    try:
        seq = [p + 1 for p in search.shortest_sequence()]
        exhaustive = True
    except SearchTimeout:
        seq, exhaustive = greedy_irredundant_base(rep).points, False
    assert is_base(rep, seq)
    return _report(rep.group, "min_base", len(seq), _base_witness(rep, seq), exhaustive, budget, t0)


def max_minimal_base(rep: Representation, budget: SearchBudget | None = None) -> MeasureReport:
    t0 = time.perf_counter()
    search = _rep_search(rep, budget)
    firsts = {o.start - 1 for o in rep.orbits}
    try:
        seq = [p + 1 for p in search.max_independent(firsts)]
        exhaustive = True
    except SearchTimeout:
        seq, exhaustive = [], False
    if exhaustive or seq:
        assert is_minimal_base(rep, seq)
    return _report(rep.group, "max_minimal_base", len(seq), _base_witness(rep, seq),
                   exhaustive, budget, t0)


def all_minimal_bases(rep: Representation, size: int) -> list[list[int]]:
    """Every minimal base of the given size, as sorted point lists (small reps only)."""
    out = []
    for combo in combinations(range(1, rep.degree + 1), size):
        if is_minimal_base(rep, combo):
            out.append(list(combo))
    return out


# -- chain and family constructions ------------------------------------------

def validate_subgroup_chain(G: PermGroup, chain: list[PermGroup]) -> bool:
    if not chain or not chain[0].same_group(G) or chain[-1].order != 1:
        return False
    for upper, lower in zip(chain, chain[1:]):
        if lower.order >= upper.order or not lower.is_subgroup_of(upper):
            return False
    return True


def chain_to_irredundant_base(G: PermGroup, chain: list[PermGroup]) -> tuple[Representation, BaseSequence]:
    """Union of the coset actions on the proper members of a descending chain; the
    identity cosets, in chain order, form an irredundant base."""
    if not validate_subgroup_chain(G, chain):
        raise ValueError("not a strictly descending chain from G to 1")
    rep = coset_union(G, chain[1:])
    base = BaseSequence(rep, [o.start for o in rep.orbits])
    return rep, base


def stabilizer_prefix_chain(rep: Representation, seq) -> list[int]:
    """Orders of the pointwise stabilizers of the prefixes of ``seq``."""
    cur = rep.table.all_mask
    orders = [bin(cur).count("1")]
    for m in _masks(rep, seq):
        cur &= m
        orders.append(bin(cur).count("1"))
    return orders


# -- invariants over all representations ---------------------------------------

def _chain_witness(L: SubgroupLattice, nodes: list[int]) -> list[list[str]]:
    return [L.cycle_strings(i) for i in nodes]


def longest_chain_report(G: PermGroup, budget: SearchBudget | None = None) -> MeasureReport:
    t0 = time.perf_counter()
    L = get_lattice(G)
    value, chain = longest_chain(L)
    return _report(G, "l", value, {"chain": _chain_witness(L, chain.nodes)}, True, budget, t0)


def b1(G: PermGroup, budget: SearchBudget | None = None) -> MeasureReport:
    """Longest subgroup chain, realized as an irredundant base of that length."""
    t0 = time.perf_counter()
    L = get_lattice(G)
    value, chain = longest_chain(L)
    groups = [L.subgroup(i) for i in chain.nodes]
    rep, base = chain_to_irredundant_base(G, groups)
    assert len(base) == value and is_irredundant(rep, base.points) and is_base(rep, base.points)
    witness = {"chain": _chain_witness(L, chain.nodes), **_base_witness(rep, base.points)}
    return _report(G, "b1", value, witness, True, budget, t0)


def b2(G: PermGroup, budget: SearchBudget | None = None) -> MeasureReport:
    """Largest Boolean meet-family with normal minimum, realized as a minimal base."""
    from .semilattice import max_boolean_meet, meet_to_minimal_base

    t0 = time.perf_counter()
    emb = max_boolean_meet(G, require_normal_min=True, budget=budget)
    witness = {"family": emb.family_strings()}
    if emb.n:
        rep, base = meet_to_minimal_base(G, emb.family)
        assert is_minimal_base(rep, base.points) and len(base) == emb.n
        witness.update(_base_witness(rep, base.points))
    return _report(G, "b2", emb.n, witness, emb.exhaustive, budget, t0)


def _is_marked_simple(G: PermGroup) -> bool:
    from .catalog import UnknownGroupError, parse_group_spec

    if not G.name:
        return False
    try:
        return parse_group_spec(G.name).simple
    except UnknownGroupError:
        return False


def _class_min_base(L: SubgroupLattice, classes, dl) -> int:
    masks = [L.nodes[i].mask for c in classes for i in L.class_members[L.nodes[c].class_id]]
    target = L.table.all_mask
    for m in masks:
        target &= m
    return StabilizerSearch(masks, L.table.all_mask, target, dl).shortest(L.table.all_mask)


def b3(G: PermGroup, budget: SearchBudget | None = None, simple: bool | None = None) -> MeasureReport:
    """Maximum over representations of the minimum base size.

    For groups marked non-abelian simple only primitive actions (cosets of
    maximal subgroups) are examined.  Otherwise unions of coset actions on
    distinct subgroup classes are searched within the budget; the result is
    exact when every union was examined or when it meets the ``b2`` bound.
    """
    t0 = time.perf_counter()
    budget = budget or DEFAULT_BUDGET
    if simple is None:
        simple = _is_marked_simple(G)
    L = get_lattice(G)
    dl = budget.deadline()
    if G.order == 1:
        return _report(G, "b3", 0, {"representation": [], "base": []}, True, budget, t0)
    reps = [r for r in L.class_reps if r != L.top]
    best, best_combo, exhaustive = -1, None, True
    upper = None
    try:
        if simple:
            maxi = sorted({L.class_reps[L.nodes[m].class_id] for m in L.maximal_subgroups()})
            for r in maxi:
                v = _class_min_base(L, [r], dl)
                if v > best:
                    best, best_combo = v, (r,)
        else:
            # a minimum base is a minimal base, so b2 caps the search
            ub = b2(G, budget)
            upper = ub.value if ub.exhaustive else None
            if budget.max_classes is not None and len(reps) > budget.max_classes:
                reps = reps[: budget.max_classes]
                exhaustive = False
            if budget.max_orbits < len(reps):
                exhaustive = False
            for k in range(1, min(budget.max_orbits, len(reps)) + 1):
                for combo in combinations(reps, k):
                    deg = sum(G.order // L.nodes[r].order for r in combo)
                    if deg > budget.max_degree:
                        exhaustive = False
                        continue
                    v = _class_min_base(L, combo, dl)
                    if v > best:
                        best, best_combo = v, combo
                    if best == upper:
                        break
                if best == upper:
                    break
    except SearchTimeout:
        exhaustive = False
    if best_combo is None:
        return _report(G, "b3", 0, {"representation": [], "base": []}, False, budget, t0)
    if best == upper:
        exhaustive = True
    rep = coset_union(G, [L.subgroup(r) for r in best_combo])
    seq = [p + 1 for p in StabilizerSearch(rep.stab_masks, rep.table.all_mask,
                                           rep.kernel_mask).shortest_sequence()]
    assert len(seq) == best and is_base(rep, seq)
    return _report(G, "b3", best, _base_witness(rep, seq), exhaustive, budget, t0)


# -- generation invariants ------------------------------------------------------

def _elements_of(L: SubgroupLattice, cyc_nodes) -> list[str]:
    return [format_cycles(L.table.elements[L.generators(c)[0]]) for c in cyc_nodes]


def _firsts(L: SubgroupLattice, node: int, cands: list[int]) -> list[int]:
    """Candidates allowed in first position: G-class representatives at the top node."""
    if node != L.top:
        return cands
    reps = set(L.class_reps)
    return [c for c in cands if c in reps]


def d_in(L: SubgroupLattice, node: int, dl: Deadline | None = None) -> tuple[int, list[int]]:
    """Minimum number of generators of the subgroup ``node``, with cyclic-subgroup witness."""
    if node == 0:
        return 0, []
    dl = dl or Deadline(None)
    cyc = [c for c in L.cyclic_nodes if c != 0 and L.leq(c, node)]
    level: dict[int, tuple[int, ...]] = {}
    for c in _firsts(L, node, cyc):
        level.setdefault(c, (c,))
    k = 1
    while node not in level:
        nxt: dict[int, tuple[int, ...]] = {}
        for s in sorted(level):
            dl.check()
            wit = level[s]
            for c in cyc:
                j = L.join(s, c)
                if j != s and j not in nxt:
                    nxt[j] = wit + (c,)
        level = nxt
        k += 1
    return k, list(level[node])


def independent_in(L: SubgroupLattice, node: int, cands: list[int], generating: bool,
                   dl: Deadline | None = None) -> list[int]:
    """Largest family of candidate subgroups of ``node``, none inside the join of the others.

    With ``generating`` the join must be ``node`` itself.  Branch and bound: the
    span strictly grows with each member, so at most ``l(node) - l(span)`` more
    members fit.
    """
    dl = dl or Deadline(None)
    ell = L.chain_lengths
    top_len = ell[node]
    cands = [c for c in cands if c != 0 and L.leq(c, node)]
    firsts = set(_firsts(L, node, cands))
    best: list[int] = []

    def dfs(start, chosen, span, others):
        nonlocal best
        dl.check()
        if len(chosen) > len(best) and (not generating or span == node):
            best = list(chosen)
        if len(chosen) + top_len - ell[span] <= len(best):
            return
        for pos in range(start, len(cands)):
            c = cands[pos]
            if not chosen and c not in firsts:
                continue
            new = L.join(span, c)
            if new == span:
                continue
            new_others = [L.join(o, c) for o in others]
            if any(L.leq(chosen[i], new_others[i]) for i in range(len(chosen))):
                continue
            new_others.append(span)
            chosen.append(c)
            dfs(pos + 1, chosen, new, new_others)
            chosen.pop()

    dfs(0, [], 0, [])
    return best


def _independent_report(G, invariant, generating, budget):
    t0 = time.perf_counter()
    L = get_lattice(G)
    dl = (budget or DEFAULT_BUDGET).deadline()
    try:
        fam = independent_in(L, L.top, L.prime_power_cyclic_nodes, generating, dl)
        exhaustive = True
    except SearchTimeout:
        fam, exhaustive = [], False
    return _report(G, invariant, len(fam), {"elements": _elements_of(L, fam)}, exhaustive, budget, t0)


def d(G: PermGroup, budget: SearchBudget | None = None) -> MeasureReport:
    t0 = time.perf_counter()
    L = get_lattice(G)
    dl = (budget or DEFAULT_BUDGET).deadline()
    k, fam = d_in(L, L.top, dl)
    return _report(G, "d", k, {"elements": _elements_of(L, fam)}, True, budget, t0)


def mu(G: PermGroup, budget: SearchBudget | None = None) -> MeasureReport:
    """Largest independent generating set.

    Replacing an element by a minimal set of its prime-power parts that still
    generates with the rest keeps the set independent and no smaller, so only
    prime-power cyclic subgroups are branched on.
    """
    return _independent_report(G, "mu", True, budget)


def mu_prime(G: PermGroup, budget: SearchBudget | None = None) -> MeasureReport:
    return _independent_report(G, "muprime", False, budget)


_LIFTABLE = ("d", "mu", "muprime", "l")


def _value_in(L: SubgroupLattice, f: str, node: int, dl) -> tuple[int, list[int]]:
    if f == "d":
        return d_in(L, node, dl)
    if f == "l":
        return L.chain_lengths[node], []
    fam = independent_in(L, node, L.prime_power_cyclic_nodes, f == "mu", dl)
    return len(fam), fam


def lift_max_over_subgroups(f: str, G: PermGroup, budget: SearchBudget | None = None) -> MeasureReport:
    """``f'(G) = max f(H)`` over subgroups ``H``, one per conjugacy class."""
    if f not in _LIFTABLE:
        raise ValueError(f"cannot lift invariant {f!r}; choose from {_LIFTABLE}")
    t0 = time.perf_counter()
    L = get_lattice(G)
    dl = (budget or DEFAULT_BUDGET).deadline()
    best, best_node, best_fam = -1, 0, []
    exhaustive = True
    try:
        for r in L.class_reps:
            v, fam = _value_in(L, f, r, dl)
            if v > best:
                best, best_node, best_fam = v, r, fam
    except SearchTimeout:
        exhaustive = False
    name = "dprime" if f == "d" else f + "_lift"
    witness = {"subgroup": L.cycle_strings(best_node), "elements": _elements_of(L, best_fam)}
    return _report(G, name, max(best, 0), witness, exhaustive, budget, t0)


def d_prime(G: PermGroup, budget: SearchBudget | None = None) -> MeasureReport:
    return lift_max_over_subgroups("d", G, budget)


def compute(G: PermGroup, invariant: str, budget: SearchBudget | None = None, **kw) -> MeasureReport:
    table = {
        "b1": b1, "b2": b2, "b3": b3, "l": longest_chain_report, "d": d,
        "dprime": d_prime, "mu": mu, "muprime": mu_prime,
    }
    if invariant not in table:
        raise ValueError(f"unknown invariant {invariant!r}")
    return table[invariant](G, budget, **kw)
