"""Permutation groups backed by a deterministic Schreier-Sims stabilizer chain.

Small groups (order up to ``TABLE_CAP``) also expose an :class:`ElementTable`:
the sorted element list, a full multiplication table and helpers that treat a
subgroup as a set of element indices (plus an ``int`` bitmask).  The lattice
and search code runs entirely on that table.
"""

from __future__ import annotations

from functools import cached_property
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .perm import Permutation

TABLE_CAP = 5040


class BudgetError(RuntimeError):
    """A configured size or time cap was exceeded."""


def _mul(a, b):
    return tuple([b[x] for x in a])


def _inv(a):
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


class _Chain:
    """Stabilizer chain: base points, strong generators per level, transversals.

    ``trans[i][beta]`` maps ``base[i]`` to ``beta``; ``itrans`` holds the inverses.
    """

    def __init__(self, gens: list[tuple], degree: int, prefix: Sequence[int] = ()):
        ident = tuple(range(degree))
        self.ident = ident
        gens = [g for g in gens if g != ident]
        base = list(prefix)
        for g in gens:
            if all(g[b] == b for b in base):
                base.append(next(i for i in range(degree) if g[i] != i))
        self.base = base
        self.strong = [
            [g for g in gens if all(g[base[j]] == base[j] for j in range(i))]
            for i in range(len(base))
        ]
        self.trans: list[dict] = []
        self.itrans: list[dict] = []
        for i in range(len(base)):
            self._append_level_transversal(i)
        self._complete()

    def _transversal(self, i):
        b = self.base[i]
        t = {b: self.ident}
        queue = [b]
        for beta in queue:
            u = t[beta]
            for s in self.strong[i]:
                gamma = s[beta]
                if gamma not in t:
                    t[gamma] = _mul(u, s)
                    queue.append(gamma)
        return t, {k: _inv(v) for k, v in t.items()}

    def _append_level_transversal(self, i):
        t, it = self._transversal(i)
        if i < len(self.trans):
            self.trans[i], self.itrans[i] = t, it
        else:
            self.trans.append(t)
            self.itrans.append(it)

    def sift(self, g, start=0):
        for level in range(start, len(self.base)):
            beta = g[self.base[level]]
            iu = self.itrans[level].get(beta)
            if iu is None:
                return g, level
            g = _mul(g, iu)
        return g, len(self.base)

    def _complete(self):
        ident = self.ident
        i = len(self.base) - 1
        while i >= 0:
            jumped = False
            trans, itrans = self.trans[i], self.itrans[i]
            for beta, u in list(trans.items()):
                for s in self.strong[i]:
                    sg = _mul(_mul(u, s), itrans[s[beta]])
                    if sg == ident:
                        continue
                    h, j = self.sift(sg, i + 1)
                    if j == len(self.base) and h == ident:
                        continue
                    if j == len(self.base):
                        self.base.append(next(p for p in range(len(h)) if h[p] != p))
                        self.strong.append([])
                        self.trans.append({})
                        self.itrans.append({})
                    for level in range(i + 1, j + 1):
                        self.strong[level].append(h)
                        self._append_level_transversal(level)
                    i = j
                    jumped = True
                    break
                if jumped:
                    break
            if not jumped:
                i -= 1

    @property
    def order(self) -> int:
        return prod(len(t) for t in self.trans)

    def contains(self, g) -> bool:
        h, j = self.sift(g)
        return j == len(self.base) and h == self.ident


class PermGroup:
    """Group generated by permutations of a common degree.

    The empty generator list is allowed when ``degree`` is given and yields
    the trivial group on that many points.
    """

    def __init__(self, generators: Iterable[Permutation], degree: int | None = None,
                 name: str | None = None):
        gens = tuple(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree required for an empty generator list")
            degree = gens[0].degree
        if degree < 1:
            raise ValueError("degree must be positive")
        for g in gens:
            if g.degree != degree:
                raise ValueError(f"degree mismatch: {g!r} is not of degree {degree}")
        self.degree = degree
        self.generators = gens
        self.name = name
        self._chain = _Chain([g.array for g in gens], degree)

    def __repr__(self):
        label = self.name or f"<{', '.join(map(str, self.generators))}>"
        return f"PermGroup({label}, degree={self.degree}, order={self.order})"

    @property
    def order(self) -> int:
        return self._chain.order

    @property
    def base(self) -> list[int]:
        return [b + 1 for b in self._chain.base]

    @property
    def transversal_sizes(self) -> list[int]:
        return [len(t) for t in self._chain.trans]

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            return False
        return self._chain.contains(g.array)

    __contains__ = contains

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and all(other.contains(g) for g in self.generators)

    def same_group(self, other: "PermGroup") -> bool:
        return self.order == other.order and self.is_subgroup_of(other)

    def _check_point(self, p: int):
        if not 1 <= p <= self.degree:
            raise ValueError(f"point {p} outside 1..{self.degree}")

    def orbit(self, p: int) -> list[int]:
        self._check_point(p)
        seen = {p - 1}
        queue = [p - 1]
        for x in queue:
            for g in self.generators:
                y = g.array[x]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return sorted(x + 1 for x in seen)

    def orbits(self) -> list[list[int]]:
        out, done = [], set()
        for p in range(1, self.degree + 1):
            if p not in done:
                orb = self.orbit(p)
                done.update(orb)
                out.append(orb)
        return out

    def is_transitive(self) -> bool:
        return len(self.orbit(1)) == self.degree

    def pointwise_stabilizer(self, points: Sequence[int]) -> "PermGroup":
        for p in points:
            self._check_point(p)
        prefix = []
        for p in points:
            if p - 1 not in prefix:
                prefix.append(p - 1)
        chain = _Chain([g.array for g in self.generators], self.degree, prefix)
        k = len(prefix)
        gens = chain.strong[k] if k < len(chain.base) else []
        return PermGroup([Permutation.from_array(g) for g in gens], self.degree)

    def stabilizer(self, p: int) -> "PermGroup":
        return self.pointwise_stabilizer([p])

    def stabilizer_orbit_sizes(self, points: Sequence[int]) -> list[int]:
        """Orbit length of each point under the pointwise stabilizer of its predecessors."""
        sizes = []
        H = self
        for p in points:
            sizes.append(len(H.orbit(p)))
            H = H.stabilizer(p)
        return sizes

    def conjugate(self, g: Permutation) -> "PermGroup":
        """``g^-1 H g``."""
        gi = g.inverse()
        return PermGroup([gi * h * g for h in self.generators], self.degree)

    def elements(self) -> list[Permutation]:
        return self.table.elements

    @cached_property
    def table(self) -> "ElementTable":
        return ElementTable(self)

    def subgroup(self, generators: Iterable[Permutation], name: str | None = None) -> "PermGroup":
        H = PermGroup(generators, self.degree, name=name)
        if not H.is_subgroup_of(self):
            raise ValueError("generators do not lie in the group")
        return H


def core(G: PermGroup, H: PermGroup) -> PermGroup:
    """Largest normal subgroup of ``G`` inside ``H``."""
    if not H.is_subgroup_of(G):
        raise ValueError("H is not a subgroup of G")
    t = G.table
    idx = t.core_indices(t.subgroup_indices(H))
    return t.group_from_indices(idx)


def is_normal(G: PermGroup, H: PermGroup) -> bool:
    if not H.is_subgroup_of(G):
        raise ValueError("H is not a subgroup of G")
    return all(H.contains(g.inverse() * h * g) for g in G.generators for h in H.generators)


def conjugate(G: PermGroup, H: PermGroup, g: Permutation) -> PermGroup:
    if not G.contains(g):
        raise ValueError(f"{g} is not an element of the group")
    if not H.is_subgroup_of(G):
        raise ValueError("H is not a subgroup of G")
    return H.conjugate(g)


def closure_elements(generators: Sequence[Permutation], degree: int) -> set[tuple]:
    """Naive BFS closure, independent of the chain; used as a test oracle."""
    ident = tuple(range(degree))
    seen = {ident}
    queue = [ident]
    gens = [g.array for g in generators]
    for x in queue:
        for g in gens:
            y = _mul(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def to_mask(indices: Iterable[int], size: int) -> int:
    buf = bytearray((size + 7) >> 3)
    for i in indices:
        buf[i >> 3] |= 1 << (i & 7)
    return int.from_bytes(buf, "little")


def from_mask(mask: int) -> list[int]:
    bits = bin(mask)[:1:-1]
    return [i for i, c in enumerate(bits) if c == "1"]


class ElementTable:
    """All elements of a small group, sorted by image tuple, with a Cayley table.

    Index 0 is the identity.  ``mul[a][b]`` is the index of ``a * b``.
    """

    def __init__(self, G: PermGroup, cap: int = TABLE_CAP):
        if G.order > cap:
            raise BudgetError(f"group order {G.order} exceeds element-table cap {cap}")
        self.group = G
        n = G.degree
        elems = sorted(closure_elements(G.generators, n))
        assert len(elems) == G.order
        self.arrays = elems
        self.size = N = len(elems)
        self.index = {a: i for i, a in enumerate(elems)}
        self.elements = [Permutation.from_array(a) for a in elems]
        self.mul = self._cayley(elems, n)
        self.inv = [self.index[_inv(a)] for a in elems]
        self.gen_indices = [self.index[g.array] for g in G.generators]
        self.all_mask = (1 << N) - 1

    def _cayley(self, elems, n):
        N = len(elems)
        if n <= 15:
            E = np.array(elems, dtype=np.int64)
            weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
            keys = E @ weights
            rows = []
            for a in range(N):
                # row a: product a*b = b[a[.]] for every b
                prods = E[:, E[a]] @ weights
                rows.append(np.searchsorted(keys, prods).tolist())
            return rows
        index = self.index
        return [[index[tuple([b[x] for x in a])] for b in elems] for a in elems]

    @cached_property
    def element_orders(self) -> list[int]:
        out = []
        mul = self.mul
        for a in range(self.size):
            k, x = 1, a
            while x != 0:
                x = mul[x][a]
                k += 1
            out.append(k)
        return out

    def idx(self, g: Permutation) -> int:
        return self.index[g.array]

    def mask(self, indices: Iterable[int]) -> int:
        return to_mask(indices, self.size)

    def extend(self, elems: list[int], gens: list[int], new: int) -> list[int]:
        """Elements of ``<K, new>`` where ``elems`` is the subgroup ``K = <gens>``.

        Dimino-style: the result is assembled as right cosets of ``K``.
        """
        mul = self.mul
        members = set(elems)
        if new in members:
            return elems
        out = list(elems)
        allgens = list(gens) + [new]
        reps = [0]

        def add_coset(r):
            coset = [mul[h][r] for h in elems]
            out.extend(coset)
            members.update(coset)
            reps.append(r)

        add_coset(new)
        for r in reps:
            row = mul[r]
            for s in allgens:
                y = row[s]
                if y not in members:
                    add_coset(y)
        return out

    def closure(self, gens: Iterable[int]) -> list[int]:
        elems = [0]
        used: list[int] = []
        for g in gens:
            if g == 0:
                continue
            grown = self.extend(elems, used, g)
            if grown is not elems:
                used.append(g)
                elems = grown
        return elems

    def closure_with_gens(self, gens: Iterable[int]) -> tuple[list[int], list[int]]:
        """Closure plus the irredundant generator prefix that was actually used."""
        elems = [0]
        used: list[int] = []
        for g in gens:
            if g == 0:
                continue
            grown = self.extend(elems, used, g)
            if grown is not elems:
                used.append(g)
                elems = grown
        return elems, used

    def subgroup_indices(self, H: PermGroup) -> list[int]:
        return self.closure(self.index[g.array] for g in H.generators)

    def conjugate_indices(self, elems: Iterable[int], x: int) -> list[int]:
        mul, xi = self.mul, self.inv[x]
        row = mul[xi]
        return [mul[row[h]][x] for h in elems]

    def core_indices(self, elems: list[int]) -> list[int]:
        current = set(elems)
        for x in range(self.size):
            if len(current) == 1:
                break
            current &= set(self.conjugate_indices(elems, x))
        return sorted(current)

    def right_cosets(self, elems: list[int]) -> tuple[list[int], list[int]]:
        """``(coset_of, reps)``: coset id of every element, and each coset's least element.

        Cosets are numbered by their least element, so the subgroup itself is coset 0.
        """
        coset_of = [-1] * self.size
        reps = []
        mul = self.mul
        for x in range(self.size):
            if coset_of[x] >= 0:
                continue
            c = len(reps)
            reps.append(x)
            for h in elems:
                coset_of[mul[h][x]] = c
        return coset_of, reps

    def small_generators(self, elems: list[int]) -> list[int]:
        """Deterministic short generating set: greedily add the least element not yet generated."""
        target = len(elems)
        span = [0]
        span_set = {0}
        used: list[int] = []
        # prefer elements of large order so that few generators are needed
        orders = self.element_orders
        for g in sorted(elems, key=lambda e: (-orders[e], e)):
            if len(span) == target:
                break
            if g in span_set:
                continue
            span = self.extend(span, used, g)
            span_set = set(span)
            used.append(g)
        return used

    def group_from_indices(self, elems: list[int], name: str | None = None) -> PermGroup:
        gens = [self.elements[i] for i in self.small_generators(elems)]
        return PermGroup(gens, self.group.degree, name=name)
