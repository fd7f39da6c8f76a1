"""Permutation representations as labeled unions of transitive pieces.

A :class:`Representation` of a group ``G`` is a disjoint union of orbits, each
either a G-orbit of the natural domain ("points") or the right-coset action on
a subgroup ("cosets").  Representations need not be faithful; the kernel is
always carried along.  Every point's stabilizer is kept as a subgroup of ``G``
(element indices and bitmask), which is all the base searches need.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .group import ElementTable, PermGroup
from .perm import Permutation, format_cycles


@dataclass
class Orbit:
    kind: str  # "points" or "cosets"
    start: int  # first global point label (1-based)
    size: int
    subgroup: PermGroup | None = None  # cosets only
    domain_points: list[int] | None = None  # points only, in local order
    coset_reps: list[int] | None = field(default=None, repr=False)
    coset_of: list[int] | None = field(default=None, repr=False)

    @property
    def points(self) -> range:
        return range(self.start, self.start + self.size)

    def describe(self) -> dict:
        if self.kind == "points":
            return {"kind": "points", "points": list(self.domain_points)}
        return {"kind": "cosets", "degree": self.size,
                "subgroup": [format_cycles(g) for g in self.subgroup.generators]}


class Representation:
    """Action of ``group`` on ``degree`` points assembled from orbits."""

    def __init__(self, group: PermGroup, orbits: list[Orbit], stab_elems: list[tuple[int, ...]]):
        self.group = group
        self.table: ElementTable = group.table
        self.orbits = orbits
        self.degree = sum(o.size for o in orbits)
        self.stab_elems = stab_elems
        t = self.table
        self.stab_masks = [t.mask(s) for s in stab_elems]
        km = t.all_mask
        for m in self.stab_masks:
            km &= m
        self.kernel_mask = km
        self.point_orbit = [k for k, o in enumerate(orbits) for _ in range(o.size)]
        self.image_generators = [self.image_of(t.idx(g)) for g in group.generators]

    def __repr__(self):
        parts = "+".join(str(o.size) for o in self.orbits) or "0"
        return f"Representation(order={self.group.order}, degree={self.degree} = {parts})"

    def check_point(self, p: int):
        if not 1 <= p <= self.degree:
            raise ValueError(f"point {p} outside 1..{self.degree}")

    def act(self, g: Permutation, p: int) -> int:
        """Image of point ``p`` under the group element ``g``."""
        self.check_point(p)
        return self._act_index(self.table.idx(g), p)

    def _act_index(self, x: int, p: int) -> int:
        o = self.orbits[self.point_orbit[p - 1]]
        local = p - o.start
        if o.kind == "points":
            q = self.table.arrays[x][o.domain_points[local] - 1] + 1
            return o.start + o.domain_points.index(q)
        r = o.coset_reps[local]
        return o.start + o.coset_of[self.table.mul[r][x]]

    def image_of(self, x: int) -> Permutation | None:
        if self.degree == 0:
            return None
        return Permutation([self._act_index(x, p) for p in range(1, self.degree + 1)])

    def is_homomorphism(self) -> bool:
        """Checks the action on products of generator pairs."""
        t = self.table
        gens = t.gen_indices
        for a in gens:
            for b in gens:
                ab = self.image_of(t.mul[a][b])
                if ab != self.image_of(a) * self.image_of(b):
                    return False
        return True

    @property
    def kernel_elems(self) -> list[int]:
        from .group import from_mask

        return from_mask(self.kernel_mask)

    @property
    def kernel(self) -> PermGroup:
        return self.table.group_from_indices(self.kernel_elems)

    def is_faithful(self) -> bool:
        return self.kernel_mask == 1

    def point_stabilizer(self, p: int) -> PermGroup:
        self.check_point(p)
        return self.table.group_from_indices(list(self.stab_elems[p - 1]))

    def label(self, p: int) -> str:
        self.check_point(p)
        k = self.point_orbit[p - 1]
        return f"o{k + 1}:{p - self.orbits[k].start + 1}"

    def point_from_label(self, label: str) -> int:
        head, _, tail = label.partition(":")
        k, local = int(head[1:]) - 1, int(tail) - 1
        o = self.orbits[k]
        if not 0 <= local < o.size:
            raise ValueError(f"bad point label {label!r}")
        return o.start + local

    def describe(self) -> list[dict]:
        return [o.describe() for o in self.orbits]


def natural_representation(G: PermGroup) -> Representation:
    """``G`` on its own domain, one orbit descriptor per G-orbit."""
    t = G.table
    orbits, stabs = [], []
    start = 1
    for orb in G.orbits():
        orbits.append(Orbit("points", start, len(orb), domain_points=orb))
        for p in orb:
            stabs.append(tuple(i for i, a in enumerate(t.arrays) if a[p - 1] == p - 1))
        start += len(orb)
    return Representation(G, orbits, stabs)


def coset_action(G: PermGroup, H: PermGroup) -> Representation:
    """Right-coset action of ``G`` on ``G/H``; point 1 is the coset ``H``."""
    if not H.is_subgroup_of(G):
        raise ValueError("H is not a subgroup of G")
    t = G.table
    elems = t.subgroup_indices(H)
    return _coset_rep(G, H, elems)


def _coset_rep(G: PermGroup, H: PermGroup, elems: list[int], start: int = 1) -> Representation:
    t = G.table
    coset_of, reps = t.right_cosets(elems)
    orbit = Orbit("cosets", start, len(reps), subgroup=H, coset_reps=reps, coset_of=coset_of)
    stabs = [tuple(sorted(t.conjugate_indices(elems, r))) for r in reps]
    return Representation(G, [orbit], stabs)


def union_representation(parts: list[Representation], group: PermGroup | None = None) -> Representation:
    """Disjoint union; points of later parts are shifted past earlier ones."""
    if not parts:
        if group is None:
            raise ValueError("an empty union needs the group")
        return Representation(group, [], [])
    G = parts[0].group
    for r in parts[1:]:
        if r.group is not G and not r.group.same_group(G):
            raise ValueError("representations of different groups")
    orbits, stabs = [], []
    start = 1
    for r in parts:
        for o in r.orbits:
            orbits.append(Orbit(o.kind, start, o.size, o.subgroup, o.domain_points,
                                o.coset_reps, o.coset_of))
            start += o.size
        stabs.extend(r.stab_elems)
    return Representation(G, orbits, stabs)


def coset_union(G: PermGroup, subgroups: list[PermGroup]) -> Representation:
    """Union of the coset actions on each subgroup, in the given order."""
    return union_representation([coset_action(G, H) for H in subgroups], group=G)


def restrict_to_orbit(rep: Representation, k: int) -> Representation:
    o = rep.orbits[k]
    orbit = Orbit(o.kind, 1, o.size, o.subgroup, o.domain_points, o.coset_reps, o.coset_of)
    return Representation(rep.group, [orbit], rep.stab_elems[o.start - 1:o.start - 1 + o.size])
