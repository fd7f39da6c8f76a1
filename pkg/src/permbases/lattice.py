"""Subgroup lattices of small permutation groups.

Subgroups are enumerated by cyclic extension over conjugacy-class
representatives and stored as sorted element-index tuples plus bitmasks over
the group's :class:`~permbases.group.ElementTable`.  Node ids follow the
order ``(|H|, mask)``, so node 0 is the trivial group and the last node is G.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .group import BudgetError, PermGroup
from .perm import format_cycles, parse_cycles

LATTICE_CAP = 2000
LATTICE_MAGIC = "permbases-lattice"
LATTICE_VERSION = 1


class LatticeFormatError(ValueError):
    pass


@dataclass
class SubgroupNode:
    id: int
    order: int
    elems: tuple[int, ...] = field(repr=False)
    mask: int = field(repr=False)
    is_normal: bool = False
    class_id: int = -1


@dataclass
class ChainWitness:
    """Node ids from G down to the trivial group."""

    nodes: list[int]

    @property
    def length(self) -> int:
        return len(self.nodes) - 1


def _is_prime_power(k: int) -> bool:
    if k < 2:
        return False
    p = 2
    while k % p:
        p += 1
    while k % p == 0:
        k //= p
    return k == 1


class SubgroupLattice:
    def __init__(self, group: PermGroup, elem_lists: list[list[int]],
                 class_ids: list[int] | None = None, covers: list[tuple[int, int]] | None = None):
        self.group = group
        self.table = t = group.table
        keyed = sorted((len(e), t.mask(e), tuple(sorted(e))) for e in elem_lists)
        self.nodes: list[SubgroupNode] = [
            SubgroupNode(i, order, elems, m) for i, (order, m, elems) in enumerate(keyed)
        ]
        self.by_mask = {n.mask: n.id for n in self.nodes}
        if len(self.by_mask) != len(self.nodes):
            raise ValueError("duplicate subgroups in node list")
        if self.nodes[0].order != 1 or self.nodes[-1].order != group.order:
            raise ValueError("lattice must contain the trivial group and G")
        if class_ids is None:
            class_ids = self._conjugacy_classes()
        self._set_classes(class_ids)
        self.covers = sorted(covers) if covers is not None else self._compute_covers()
        self._gens: dict[int, list[int]] = {}

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        return f"SubgroupLattice({self.group!r}, nodes={len(self.nodes)}, classes={len(self.class_reps)})"

    # -- construction helpers -------------------------------------------------

    @cached_property
    def conj_maps(self) -> list[list[int]]:
        t = self.table
        maps = []
        for g in t.gen_indices:
            gi = t.inv[g]
            maps.append([t.mul[t.mul[gi][x]][g] for x in range(t.size)])
        return maps

    def _conjugacy_classes(self) -> list[int]:
        cls = [-1] * len(self.nodes)
        next_id = 0
        for n in self.nodes:
            if cls[n.id] >= 0:
                continue
            cls[n.id] = next_id
            queue = [n.elems]
            for elems in queue:
                for cmap in self.conj_maps:
                    img = self.by_mask[self.table.mask(cmap[x] for x in elems)]
                    if cls[img] < 0:
                        cls[img] = next_id
                        queue.append(self.nodes[img].elems)
            next_id += 1
        return cls

    def _set_classes(self, class_ids):
        self.class_members: dict[int, list[int]] = {}
        for n, c in zip(self.nodes, class_ids):
            n.class_id = c
            self.class_members.setdefault(c, []).append(n.id)
        for c, members in self.class_members.items():
            normal = len(members) == 1
            for i in members:
                self.nodes[i].is_normal = normal
        self.class_reps = [self.class_members[c][0] for c in sorted(self.class_members)]

    def _compute_covers(self) -> list[tuple[int, int]]:
        # process candidates by decreasing order: a is maximal in b iff it lies
        # in none of the maximal subgroups already found
        covers = []
        nodes = self.nodes
        for b in nodes:
            found: list[int] = []
            bm = b.mask
            for a in range(b.id - 1, -1, -1):
                an = nodes[a]
                if an.order == b.order or b.order % an.order:
                    continue
                am = an.mask
                if am & bm != am:
                    continue
                if any(am & nodes[m].mask == am for m in found):
                    continue
                found.append(a)
            covers.extend((a, b.id) for a in found)
        return sorted(covers)

    # -- queries ------------------------------------------------------------

    @property
    def top(self) -> int:
        return len(self.nodes) - 1

    @property
    def bottom(self) -> int:
        return 0

    def _check(self, *ids):
        for i in ids:
            if not (isinstance(i, int) and 0 <= i < len(self.nodes)):
                raise IndexError(f"invalid node id {i!r}")

    def leq(self, a: int, b: int) -> bool:
        am = self.nodes[a].mask
        return am & self.nodes[b].mask == am

    def meet(self, a: int, b: int) -> int:
        self._check(a, b)
        return self.by_mask[self.nodes[a].mask & self.nodes[b].mask]

    def meet_all(self, ids) -> int:
        m = self.table.all_mask
        for i in ids:
            m &= self.nodes[i].mask
        return self.by_mask[m]

    @cached_property
    def upsets(self) -> list[int]:
        """Bitset over node ids of the subgroups containing each node."""
        up = [0] * len(self.nodes)
        for a in range(len(self.nodes) - 1, -1, -1):
            m = 1 << a
            for b in self.upper_covers[a]:
                m |= up[b]
            up[a] = m
        return up

    def join(self, a: int, b: int) -> int:
        """Least common upper bound: node ids grow with order, so take the lowest common bit."""
        self._check(a, b)
        common = self.upsets[a] & self.upsets[b]
        return (common & -common).bit_length() - 1

    def join_by_scan(self, a: int, b: int) -> int:
        """Same as :meth:`join`, computed from element masks alone."""
        self._check(a, b)
        u = self.nodes[a].mask | self.nodes[b].mask
        for n in self.nodes[max(a, b):]:
            if n.mask & u == u:
                return n.id
        raise AssertionError("no upper bound")

    def join_all(self, ids) -> int:
        cur = 0
        for i in ids:
            cur = self.join(cur, i)
        return cur

    @cached_property
    def lower_covers(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.nodes]
        for a, b in self.covers:
            out[b].append(a)
        return out

    @cached_property
    def upper_covers(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.nodes]
        for a, b in self.covers:
            out[a].append(b)
        return out

    def maximal_subgroups(self, node: int | None = None) -> list[int]:
        return list(self.lower_covers[self.top if node is None else node])

    def below(self, node: int) -> list[int]:
        """Ids of all subgroups of ``node`` (including itself)."""
        m = self.nodes[node].mask
        return [n.id for n in self.nodes[: node + 1] if n.mask & m == n.mask]

    @cached_property
    def cyclic_of(self) -> list[int]:
        """Node id of the cyclic subgroup generated by each element index."""
        t = self.table
        out = []
        for g in range(t.size):
            pw, x = [0], g
            while x != 0:
                pw.append(x)
                x = t.mul[x][g]
            out.append(self.by_mask[t.mask(pw)])
        return out

    @cached_property
    def cyclic_nodes(self) -> list[int]:
        return sorted(set(self.cyclic_of))

    @cached_property
    def prime_power_cyclic_nodes(self) -> list[int]:
        return [c for c in self.cyclic_nodes if _is_prime_power(self.nodes[c].order)]

    @cached_property
    def chain_lengths(self) -> list[int]:
        """l(H) for each node: 1 + max over maximal subgroups, l(1) = 0."""
        ell = [0] * len(self.nodes)
        for n in self.nodes[1:]:
            ell[n.id] = 1 + max(ell[a] for a in self.lower_covers[n.id])
        return ell

    def generators(self, node: int) -> list[int]:
        g = self._gens.get(node)
        if g is None:
            g = self.table.small_generators(list(self.nodes[node].elems))
            self._gens[node] = g
        return g

    def generator_perms(self, node: int):
        return [self.table.elements[i] for i in self.generators(node)]

    def subgroup(self, node: int) -> PermGroup:
        return PermGroup(self.generator_perms(node), self.group.degree)

    def node_of(self, H: PermGroup) -> int:
        if not H.is_subgroup_of(self.group):
            raise ValueError("not a subgroup of the lattice's group")
        return self.by_mask[self.table.mask(self.table.subgroup_indices(H))]

    def node_of_elements(self, elems) -> int:
        return self.by_mask[self.table.mask(elems)]

    def core(self, node: int) -> int:
        members = self.class_members[self.nodes[node].class_id]
        return self.meet_all(members)

    def normalizes(self, node: int) -> bool:
        return self.nodes[node].is_normal

    def cycle_strings(self, node: int) -> list[str]:
        return [format_cycles(p) for p in self.generator_perms(node)]


def enumerate_subgroups(G: PermGroup, cap: int = LATTICE_CAP) -> SubgroupLattice:
    """All subgroups of ``G`` by cyclic extension of class representatives."""
    if G.order > cap:
        raise BudgetError(f"group order {G.order} exceeds lattice cap {cap}")
    t = G.table
    mul, inv = t.mul, t.inv
    conj_maps = []
    for g in t.gen_indices:
        gi = inv[g]
        conj_maps.append([mul[mul[gi][x]][g] for x in range(t.size)])

    found: dict[int, list[int]] = {}
    work: list[tuple[list[int], list[int]]] = []

    def add_class(elems: list[int], gens: list[int]):
        m = t.mask(elems)
        if m in found:
            return
        found[m] = elems
        work.append((elems, gens))
        queue = [elems]
        for e in queue:
            for cmap in conj_maps:
                img = [cmap[x] for x in e]
                im = t.mask(img)
                if im not in found:
                    found[im] = img
                    queue.append(img)

    add_class([0], [])
    seen_cyclic: dict[int, int] = {}
    orders = t.element_orders
    for g in range(1, t.size):
        pw, x = [0], g
        while x != 0:
            pw.append(x)
            x = mul[x][g]
        m = t.mask(pw)
        if m not in seen_cyclic:
            seen_cyclic[m] = g
            add_class(pw, [g])
    extenders = [g for g in sorted(seen_cyclic.values()) if _is_prime_power(orders[g])]

    i = 0
    while i < len(work):
        elems, gens = work[i]
        i += 1
        members = set(elems)
        for z in extenders:
            if z in members:
                continue
            add_class(t.extend(elems, gens, z), gens + [z])

    return SubgroupLattice(G, list(found.values()))


def longest_chain(L: SubgroupLattice, node: int | None = None) -> tuple[int, ChainWitness]:
    """Length of the longest chain below ``node`` (default G) and a witness.

    Each step descends to a maximal subgroup; among equally long options the
    least node id is taken.
    """
    ell = L.chain_lengths
    cur = L.top if node is None else node
    path = [cur]
    while cur != 0:
        cur = min(L.lower_covers[cur], key=lambda a: (-ell[a], a))
        path.append(cur)
    return ell[path[0]], ChainWitness(path)


def longest_hasse_path(L: SubgroupLattice) -> int:
    """Longest bottom-to-top path in the cover graph, by forward relaxation."""
    dist = [-1] * len(L.nodes)
    dist[0] = 0
    for a in range(len(L.nodes)):
        if dist[a] < 0:
            continue
        for b in L.upper_covers[a]:
            dist[b] = max(dist[b], dist[a] + 1)
    return dist[L.top]


def validate_chain(L: SubgroupLattice, chain: ChainWitness) -> bool:
    ids = chain.nodes
    if not ids or ids[0] != L.top or ids[-1] != 0:
        return False
    for upper, lower in zip(ids, ids[1:]):
        if not (L.nodes[lower].order < L.nodes[upper].order and L.leq(lower, upper)):
            return False
    return True


def hasse_dot(L: SubgroupLattice, name: str = "subgroups") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=ellipse];"]
    for n in L.nodes:
        tag = " normal" if n.is_normal else ""
        shape = ", shape=box" if n.is_normal else ""
        lines.append(f'  n{n.id} [label="{n.id}: order {n.order}{tag}"{shape}];')
    for a, b in L.covers:
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_document(L: SubgroupLattice, group_ref: str | None = None) -> dict:
    G = L.group
    return {
        "magic": LATTICE_MAGIC,
        "version": LATTICE_VERSION,
        "group": {
            "ref": group_ref or G.name,
            "degree": G.degree,
            "generators": [format_cycles(g) for g in G.generators],
        },
        "nodes": [
            {
                "id": n.id,
                "order": n.order,
                "generators": L.cycle_strings(n.id),
                "normal": n.is_normal,
                "class_id": n.class_id,
            }
            for n in L.nodes
        ],
        "covers": [list(c) for c in L.covers],
    }


def save_lattice(L: SubgroupLattice, path, group_ref: str | None = None) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_text(json.dumps(lattice_document(L, group_ref), indent=1))
    os.replace(tmp, path)


def load_lattice(path, group: PermGroup | None = None) -> SubgroupLattice:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise LatticeFormatError(f"cannot read lattice file {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("magic") != LATTICE_MAGIC:
        raise LatticeFormatError("not a lattice cache file (bad magic)")
    if doc.get("version") != LATTICE_VERSION:
        raise LatticeFormatError(f"unsupported lattice version {doc.get('version')!r}")
    try:
        gdoc = doc["group"]
        deg = gdoc["degree"]
        if group is None:
            group = PermGroup([parse_cycles(s, deg) for s in gdoc["generators"]], deg,
                              name=gdoc.get("ref"))
        t = group.table
        elem_lists = []
        for nd in doc["nodes"]:
            elems = t.closure(t.index[parse_cycles(s, deg).array] for s in nd["generators"])
            if len(elems) != nd["order"]:
                raise LatticeFormatError(f"node {nd['id']}: order mismatch")
            elem_lists.append(elems)
        L = SubgroupLattice(group, elem_lists,
                            class_ids=[nd["class_id"] for nd in doc["nodes"]],
                            covers=[tuple(c) for c in doc["covers"]])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, LatticeFormatError):
            raise
        raise LatticeFormatError(f"corrupt lattice file {path}: {exc}") from exc
    for nd, n in zip(doc["nodes"], L.nodes):
        if nd["id"] != n.id or nd["normal"] != n.is_normal:
            raise LatticeFormatError(f"node {nd['id']}: stored data disagrees with group")
    return L


def get_lattice(G: PermGroup, cap: int = LATTICE_CAP) -> SubgroupLattice:
    """Lattice of ``G``, built once and kept on the group object."""
    L = G.__dict__.get("_lattice")
    if L is None:
        L = enumerate_subgroups(G, cap)
        G.__dict__["_lattice"] = L
    return L
