"""Boolean lattices B(n) inside subgroup lattices.

A meet family ``K_1..K_n`` stands for the subgroups ``K_I`` (intersection over
``I``, with ``K_{}`` = G), indexed so that ``K_I & K_J = K_{I|J}``.  A join
family ``H_1..H_n`` stands for ``H_I = <H_i : i in I>`` with ``H_{}`` = 1.  A
family embeds B(n) exactly when it passes the per-index test: no member may be
redundant in the intersection (resp. join) of all of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .group import PermGroup
from .lattice import SubgroupLattice, get_lattice
from .measures import (
    DEFAULT_BUDGET,
    BaseSequence,
    Deadline,
    SearchBudget,
    SearchTimeout,
    _masks,
    independent_in,
    is_minimal_base,
)
from .perm import Permutation, format_cycles
from .rep import Representation, coset_union


class FamilyError(ValueError):
    pass


@dataclass
class MeetFamily:
    group: PermGroup = field(repr=False)
    members: list[PermGroup]

    @property
    def n(self) -> int:
        return len(self.members)


@dataclass
class JoinFamily:
    group: PermGroup = field(repr=False)
    members: list[PermGroup]

    @property
    def n(self) -> int:
        return len(self.members)


@dataclass
class EmbeddingReport:
    n: int
    kind: str  # meet, join, lattice
    normal_min: bool
    family: list[PermGroup] = field(default_factory=list, repr=False)
    exhaustive: bool = True

    def family_strings(self) -> list[list[str]]:
        return [[format_cycles(g) for g in H.generators] for H in self.family]

    def to_dict(self) -> dict:
        return {"n": self.n, "kind": self.kind, "normal_min": self.normal_min,
                "exhaustive": self.exhaustive, "family": self.family_strings()}


def _elements(G: PermGroup, H: PermGroup) -> list[int]:
    if not H.is_subgroup_of(G):
        raise FamilyError("family member is not a subgroup of G")
    return G.table.subgroup_indices(H)


def _meet_masks(G, members):
    t = G.table
    return [t.mask(_elements(G, H)) for H in members]


def verify_meet_embedding(G: PermGroup, family) -> bool:
    members = family.members if isinstance(family, MeetFamily) else list(family)
    masks = _meet_masks(G, members)
    full = G.table.all_mask
    total = full
    for m in masks:
        total &= m
    for i in range(len(masks)):
        rest = full
        for j, m in enumerate(masks):
            if j != i:
                rest &= m
        if rest == total:
            return False
    return True


def _join_elements(G, elem_lists) -> set[int]:
    t = G.table
    gens = []
    for e in elem_lists:
        gens.extend(t.small_generators(e))
    return set(t.closure(gens))


def verify_join_embedding(G: PermGroup, family) -> bool:
    members = family.members if isinstance(family, JoinFamily) else list(family)
    elems = [_elements(G, H) for H in members]
    for i in range(len(elems)):
        span = _join_elements(G, elems[:i] + elems[i + 1:])
        if set(elems[i]) <= span:
            return False
    return True


def meet_subsets_distinct(G: PermGroup, members: list[PermGroup]) -> bool:
    """All 2^n intersections pairwise distinct, by direct enumeration."""
    masks = _meet_masks(G, members)
    seen = set()
    for k in range(len(masks) + 1):
        for I in combinations(range(len(masks)), k):
            m = G.table.all_mask
            for i in I:
                m &= masks[i]
            seen.add(m)
    return len(seen) == 2 ** len(masks)


def join_subsets_distinct(G: PermGroup, members: list[PermGroup]) -> bool:
    elems = [_elements(G, H) for H in members]
    seen = set()
    for k in range(len(elems) + 1):
        for I in combinations(range(len(elems)), k):
            seen.add(frozenset(_join_elements(G, [elems[i] for i in I])))
    return len(seen) == 2 ** len(elems)


# -- conversions --------------------------------------------------------------

def _group_of(G: PermGroup, elems) -> PermGroup:
    return G.table.group_from_indices(sorted(elems))


def join_to_meet(family: JoinFamily) -> MeetFamily:
    """``K_i = H_{N - i}``: the join of all members but the i-th."""
    G = family.group
    if not verify_join_embedding(G, family):
        raise FamilyError("join family does not embed B(n)")
    elems = [_elements(G, H) for H in family.members]
    out = [_group_of(G, _join_elements(G, elems[:i] + elems[i + 1:])) for i in range(len(elems))]
    return MeetFamily(G, out)


def meet_to_join(family: MeetFamily) -> JoinFamily:
    """``H_i = K_{N - i}``: the intersection of all members but the i-th."""
    G = family.group
    if not verify_meet_embedding(G, family):
        raise FamilyError("meet family does not embed B(n)")
    elems = [set(_elements(G, K)) for K in family.members]
    out = []
    for i in range(len(elems)):
        rest = set(range(G.order))
        for j, e in enumerate(elems):
            if j != i:
                rest &= e
        out.append(_group_of(G, rest))
    return JoinFamily(G, out)


def independent_set_to_join(G: PermGroup, elems: list[Permutation]) -> JoinFamily:
    if not is_independent(G, elems):
        raise FamilyError("elements are not independent")
    return JoinFamily(G, [PermGroup([g], G.degree) for g in elems])


def join_to_independent_set(G: PermGroup, family: JoinFamily) -> list[Permutation]:
    """Pick from each ``H_i`` its least element outside the join of the others."""
    if not verify_join_embedding(G, family):
        raise FamilyError("join family does not embed B(n)")
    t = G.table
    elems = [_elements(G, H) for H in family.members]
    out = []
    for i in range(len(elems)):
        span = _join_elements(G, elems[:i] + elems[i + 1:])
        outside = [x for x in sorted(elems[i]) if x not in span]
        assert outside, "verified join family must have a member outside the others' join"
        out.append(t.elements[outside[0]])
    return out


def is_independent(G: PermGroup, elems: list[Permutation]) -> bool:
    """No element lies in the subgroup generated by the others."""
    t = G.table
    idx = []
    for g in elems:
        if not G.contains(g):
            raise FamilyError(f"{g} is not in the group")
        idx.append(t.idx(g))
    for i, g in enumerate(idx):
        if g in set(t.closure(idx[:i] + idx[i + 1:])):
            return False
    return True


def minimal_base_to_meet(rep: Representation, base) -> MeetFamily:
    """Point stabilizers of a minimal base; their intersection is the kernel."""
    points = base.points if isinstance(base, BaseSequence) else list(base)
    if not is_minimal_base(rep, points):
        raise FamilyError("not a minimal base")
    return MeetFamily(rep.group, [rep.point_stabilizer(p) for p in points])


def meet_to_minimal_base(G: PermGroup, family) -> tuple[Representation, BaseSequence]:
    """Union of the coset actions on the members; the identity cosets form a minimal base."""
    members = family.members if isinstance(family, MeetFamily) else list(family)
    if not verify_meet_embedding(G, members):
        raise FamilyError("meet family does not embed B(n)")
    masks = _meet_masks(G, members)
    total = G.table.all_mask
    for m in masks:
        total &= m
    from .group import from_mask

    bottom = _group_of(G, from_mask(total))
    if not all(bottom.contains(g.inverse() * h * g) for g in G.generators for h in bottom.generators):
        raise FamilyError("intersection of the family is not normal")
    rep = coset_union(G, members)
    return rep, BaseSequence(rep, [o.start for o in rep.orbits])


# -- searches -----------------------------------------------------------------

def _candidate_order(L: SubgroupLattice, ids) -> list[int]:
    # big subgroups first so good families surface early; within a class the
    # representative (least id) comes first, which the symmetry cut relies on
    return sorted(ids, key=lambda i: (-L.nodes[i].order, L.nodes[i].class_id, i))


def _canonical(L: SubgroupLattice, ids) -> list[int]:
    return sorted(ids, key=lambda i: (L.nodes[i].order, L.nodes[i].mask))


def max_meet_family(L: SubgroupLattice, require_normal_min: bool, dl: Deadline | None = None) -> list[int]:
    """Largest independent intersection family (node ids), by branch and bound.

    Members strictly shrink the running intersection, so at most
    ``l(intersection)`` further members fit.  The first member is a class
    representative (any family can be conjugated into that form).
    """
    dl = dl or Deadline(None)
    nodes = L.nodes
    ell_of = {n.mask: L.chain_lengths[n.id] for n in nodes}
    normal = {n.mask for n in nodes if n.is_normal}
    cands = _candidate_order(L, [n.id for n in nodes if n.id != L.top])
    cmasks = [nodes[c].mask for c in cands]
    reps = set(L.class_reps)
    best: list[int] = []

    def dfs(start, chosen, inter, others):
        nonlocal best
        dl.check()
        if len(chosen) > len(best) and (not require_normal_min or inter in normal):
            best = list(chosen)
        if len(chosen) + ell_of[inter] <= len(best):
            return
        for pos in range(start, len(cands)):
            if not chosen and cands[pos] not in reps:
                continue
            m = cmasks[pos]
            new = inter & m
            if new == inter:
                continue
            new_others = [o & m for o in others]
            if new in new_others:
                continue
            new_others.append(inter)
            chosen.append(cands[pos])
            dfs(pos + 1, chosen, new, new_others)
            chosen.pop()

    dfs(0, [], L.table.all_mask, [])
    return _canonical(L, best)


def max_boolean_meet(G: PermGroup, require_normal_min: bool = False,
                     budget: SearchBudget | None = None) -> EmbeddingReport:
    L = get_lattice(G)
    dl = (budget or DEFAULT_BUDGET).deadline()
    try:
        fam, exhaustive = max_meet_family(L, require_normal_min, dl), True
    except SearchTimeout:
        fam, exhaustive = [], False
    return EmbeddingReport(len(fam), "meet", require_normal_min,
                           [L.subgroup(i) for i in fam], exhaustive)


def max_boolean_join(G: PermGroup, budget: SearchBudget | None = None) -> EmbeddingReport:
    """Largest join family over all subgroups (not just cyclic ones)."""
    L = get_lattice(G)
    dl = (budget or DEFAULT_BUDGET).deadline()
    cands = _candidate_order(L, [n.id for n in L.nodes if n.id != 0])
    try:
        fam, exhaustive = independent_in(L, L.top, cands, False, dl), True
    except SearchTimeout:
        fam, exhaustive = [], False
    fam = _canonical(L, fam)
    return EmbeddingReport(len(fam), "join", False, [L.subgroup(i) for i in fam], exhaustive)


def is_lattice_embedding(L: SubgroupLattice, atoms: list[int]) -> bool:
    """Joins of the atoms give 2^n distinct subgroups from 1 to G, closed under meets."""
    n = len(atoms)
    span = {0: 0}
    for k, a in enumerate(atoms):
        for I in list(span):
            span[I | (1 << k)] = L.join(span[I], a)
    if len(set(span.values())) != 2 ** n or span[(1 << n) - 1] != L.top:
        return False
    return all(L.meet(span[I], span[J]) == span[I & J] for I in span for J in span)


def find_lattice_embedding(L: SubgroupLattice, n: int, dl: Deadline | None = None) -> list[int] | None:
    """Atoms of a B(n) sublattice with bottom 1 and top G, or None."""
    dl = dl or Deadline(None)
    if n == 0:
        return [] if L.top == 0 else None
    if L.top == 0:
        return None
    cands = [c for c in range(1, len(L.nodes)) if n == 1 or c != L.top]
    reps = set(L.class_reps)

    def partial_ok(spans: dict[int, int]) -> bool:
        if len(set(spans.values())) != len(spans):
            return False
        return all(L.meet(spans[I], spans[J]) == spans[I & J] for I in spans for J in spans)

    def dfs(start, atoms, spans):
        dl.check()
        if len(atoms) == n:
            return list(atoms) if spans[(1 << n) - 1] == L.top else None
        k = len(atoms)
        for pos in range(start, len(cands)):
            a = cands[pos]
            if not atoms and a not in reps:
                continue
            new = dict(spans)
            for I, s in spans.items():
                new[I | (1 << k)] = L.join(s, a)
            if not partial_ok(new):
                continue
            atoms.append(a)
            found = dfs(pos + 1, atoms, new)
            atoms.pop()
            if found is not None:
                return found
        return None

    return dfs(0, [], {0: 0})


def exists_lattice_embedding(G: PermGroup, n: int, budget: SearchBudget | None = None) -> EmbeddingReport:
    L = get_lattice(G)
    dl = (budget or DEFAULT_BUDGET).deadline()
    try:
        atoms, exhaustive = find_lattice_embedding(L, n, dl), True
    except SearchTimeout:
        atoms, exhaustive = None, False
    fam = [] if atoms is None else [L.subgroup(a) for a in atoms]
    return EmbeddingReport(n if atoms is not None else 0, "lattice", False, fam, exhaustive)


@dataclass
class GapReport:
    group: str
    b2: int
    mu_prime: int
    meet_max: int
    join_max: int
    strict_gap: bool
    normal_min_achievable: bool
    exact: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def hunt_gap(G: PermGroup, budget: SearchBudget | None = None) -> GapReport:
    """Compare the normal-minimum meet maximum (b2) against mu' and the free meet maximum."""
    from .measures import mu_prime

    normal = max_boolean_meet(G, True, budget)
    free = max_boolean_meet(G, False, budget)
    join = max_boolean_join(G, budget)
    mp = mu_prime(G, budget)
    return GapReport(
        group=G.name or "?",
        b2=normal.n,
        mu_prime=mp.value,
        meet_max=free.n,
        join_max=join.n,
        strict_gap=normal.n < mp.value,
        normal_min_achievable=normal.n == free.n,
        exact=normal.exhaustive and free.exhaustive and join.exhaustive and mp.exhaustive,
    )
