"""Permutations on {1..n} and cycle notation.

Points are 1-based at every public surface.  Internally a permutation keeps a
0-based image tuple (``.array``) because the group algorithms index with it
directly.  Products act on the right: ``(g * h)(p) == h(g(p))``.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

_CYCLE_RE = re.compile(r"\(([^()]*)\)")
_SEP_RE = re.compile(r"[\s,]+")


class Permutation:
    __slots__ = ("array",)

    def __init__(self, images: Sequence[int]):
        arr = tuple(int(x) - 1 for x in images)
        if not arr:
            raise ValueError("degree must be positive")
        if sorted(arr) != list(range(len(arr))):
            raise ValueError(f"not a bijection on 1..{len(arr)}: {list(images)}")
        self.array = arr

    @classmethod
    def from_array(cls, arr: Sequence[int]) -> "Permutation":
        """Wrap a 0-based image tuple without validation."""
        p = object.__new__(cls)
        p.array = tuple(arr)
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree < 1:
            raise ValueError("degree must be positive")
        return cls.from_array(range(degree))

    @property
    def degree(self) -> int:
        return len(self.array)

    @property
    def images(self) -> list[int]:
        return [x + 1 for x in self.array]

    def __call__(self, point: int) -> int:
        if not 1 <= point <= len(self.array):
            raise ValueError(f"point {point} outside 1..{len(self.array)}")
        return self.array[point - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        b = other.array
        return Permutation.from_array([b[x] for x in self.array])

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.array)
        for i, x in enumerate(self.array):
            inv[x] = i
        return Permutation.from_array(inv)

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        for _ in range(abs(k)):
            result = result * base
        return result

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.array))

    def order(self) -> int:
        from math import lcm

        return lcm(1, *(len(c) for c in self.cycles()))

    def cycles(self) -> list[list[int]]:
        """Non-trivial cycles, canonical: each starts at its least point, sorted by it."""
        seen = set()
        out = []
        for start in range(len(self.array)):
            if start in seen or self.array[start] == start:
                continue
            cyc = [start + 1]
            seen.add(start)
            j = self.array[start]
            while j != start:
                seen.add(j)
                cyc.append(j + 1)
                j = self.array[j]
            out.append(cyc)
        return out

    def __str__(self) -> str:
        return format_cycles(self)

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)!r}, degree={self.degree})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.array == other.array

    def __hash__(self) -> int:
        return hash(self.array)

    def __lt__(self, other: "Permutation") -> bool:
        return self.array < other.array


def format_cycles(p: Permutation) -> str:
    cyc = p.cycles()
    if not cyc:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse a product of disjoint cycles such as ``"(1 2 3)(4,5)"``.

    ``"()"`` is the identity.  Points not mentioned are fixed.
    """
    if degree < 1:
        raise ValueError("degree must be positive")
    stripped = text.strip()
    if not stripped:
        raise ValueError("empty cycle string")
    leftover = _CYCLE_RE.sub("", stripped)
    if leftover.strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    arr = list(range(degree))
    used: set[int] = set()
    for body in _CYCLE_RE.findall(stripped):
        body = body.strip()
        if not body:
            continue
        try:
            pts = [int(tok) for tok in _SEP_RE.split(body) if tok]
        except ValueError:
            raise ValueError(f"malformed cycle notation: {text!r}") from None
        for p in pts:
            if not 1 <= p <= degree:
                raise ValueError(f"point {p} outside 1..{degree}")
            if p in used:
                raise ValueError(f"point {p} repeated in {text!r}")
            used.add(p)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            arr[a - 1] = b - 1
    return Permutation.from_array(arr)


def compose_all(perms: Iterable[Permutation], degree: int) -> Permutation:
    result = Permutation.identity(degree)
    for p in perms:
        result = result * p
    return result
