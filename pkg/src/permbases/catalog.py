"""Built-in groups, the Fano plane representation, closed-form values and group specs."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from math import factorial
from pathlib import Path

from .group import PermGroup
from .perm import Permutation, parse_cycles
from .rep import Orbit, Representation, natural_representation

MAX_DEGREE = 12


class UnknownGroupError(ValueError):
    pass


def _cycle(points, degree):
    arr = list(range(degree))
    for a, b in zip(points, points[1:] + points[:1]):
        arr[a - 1] = b - 1
    return Permutation.from_array(arr)


def _check_n(n, lo=1):
    if not isinstance(n, int) or n < lo:
        raise ValueError(f"parameter must be an integer >= {lo}, got {n!r}")
    if n > MAX_DEGREE * 4:
        raise ValueError(f"parameter {n} exceeds catalog cap")


def make_symmetric(n: int) -> PermGroup:
    _check_n(n)
    if n > MAX_DEGREE:
        raise ValueError(f"S{n} exceeds the catalog cap")
    gens = [] if n == 1 else [_cycle([1, 2], n), _cycle(list(range(1, n + 1)), n)]
    return PermGroup(gens, n, name=f"S{n}")


def make_alternating(n: int) -> PermGroup:
    _check_n(n)
    if n > MAX_DEGREE:
        raise ValueError(f"A{n} exceeds the catalog cap")
    gens = [_cycle([1, 2, k], n) for k in range(3, n + 1)]
    return PermGroup(gens, n, name=f"A{n}")


def make_cyclic(n: int) -> PermGroup:
    _check_n(n)
    gens = [] if n == 1 else [_cycle(list(range(1, n + 1)), n)]
    return PermGroup(gens, n, name=f"C{n}")


def make_dihedral(n: int) -> PermGroup:
    """Dihedral group of order ``2n``; for ``n = 2`` the Klein four-group on 4 points."""
    _check_n(n, 2)
    if n == 2:
        gens = [parse_cycles("(1 2)(3 4)", 4), parse_cycles("(1 3)(2 4)", 4)]
        return PermGroup(gens, 4, name="D2")
    rot = _cycle(list(range(1, n + 1)), n)
    refl = Permutation([((1 - i) % n) + 1 for i in range(1, n + 1)])
    return PermGroup([rot, refl], n, name=f"D{n}")


# quaternion units as (sign, unit) with unit in 1, i, j, k -> 0..3
_QMUL = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}
QUATERNION_LABELS = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]


def _qpoint(sign, unit):
    return 2 * unit + (0 if sign == 1 else 1)


def make_quaternion8() -> PermGroup:
    """Q8 in its right regular action; point labels follow ``QUATERNION_LABELS``."""
    gens = []
    for u in (1, 2):  # right multiplication by i and by j
        arr = []
        for pt in range(8):
            unit, neg = divmod(pt, 2)
            s, v = _QMUL[(unit, u)]
            arr.append(_qpoint(-s if neg else s, v))
        gens.append(Permutation.from_array(arr))
    return PermGroup(gens, 8, name="Q8")


def quaternion_element(name: str) -> Permutation:
    """Right multiplication by the unit quaternion ``name`` (e.g. ``"-i"``)."""
    sign = -1 if name.startswith("-") else 1
    unit = "1ijk".index(name.lstrip("-"))
    arr = []
    for pt in range(8):
        u, neg = divmod(pt, 2)
        s, v = _QMUL[(u, unit)]
        s = s * sign * (-1 if neg else 1)
        arr.append(_qpoint(s, v))
    return Permutation.from_array(arr)


# F_2^3: point p (1..7) is the vector with binary digits of p
FANO_POINTS = list(range(1, 8))


def _vec(p):
    return ((p >> 2) & 1, (p >> 1) & 1, p & 1)


def _label(v):
    return (v[0] << 2) | (v[1] << 1) | v[2]


def _apply(matrix, p):
    v = _vec(p)
    return _label(tuple(sum(v[i] * matrix[i][j] for i in range(3)) % 2 for j in range(3)))


def _matrix_perm(matrix):
    return Permutation([_apply(matrix, p) for p in FANO_POINTS])


PSL27_MATRICES = (
    ((1, 1, 0), (0, 1, 0), (0, 0, 1)),  # transvection
    ((0, 1, 0), (0, 0, 1), (1, 1, 0)),  # companion matrix of x^3 + x + 1, order 7
)


def make_psl27() -> PermGroup:
    """GL(3,2) acting on the seven nonzero vectors of F_2^3 (row vectors, v -> vM)."""
    return PermGroup([_matrix_perm(m) for m in PSL27_MATRICES], 7, name="PSL27")


def fano_lines() -> list[frozenset[int]]:
    """The seven lines, each the nonzero vectors orthogonal to a fixed nonzero w; sorted."""
    lines = []
    for w in FANO_POINTS:
        wv = _vec(w)
        lines.append(frozenset(p for p in FANO_POINTS
                               if sum(a * b for a, b in zip(_vec(p), wv)) % 2 == 0))
    return sorted(lines, key=sorted)


def all_gl32_matrices():
    for entries in product((0, 1), repeat=9):
        m = (entries[0:3], entries[3:6], entries[6:9])
        det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
               - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
               + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])) % 2
        if det:
            yield m


def fano_incidence_rep() -> Representation:
    """PSL(3,2) on the 7 points followed by the 7 lines of the Fano plane (degree 14).

    Points keep their labels 1..7.  Line ``8 + k`` is ``fano_lines()[k]``.
    """
    G = make_psl27()
    t = G.table
    nat = natural_representation(G)
    lines = fano_lines()
    line_index = {ln: k for k, ln in enumerate(lines)}
    stabs = list(nat.stab_elems)
    for ln in lines:
        stabs.append(tuple(i for i, a in enumerate(t.arrays)
                           if frozenset(a[p - 1] + 1 for p in ln) == ln))
    # the line orbit is the coset action on the stabilizer of lines[0]; order the
    # cosets so that coset k corresponds to line k
    H_elems = list(stabs[7])
    coset_of_elem = [line_index[frozenset(a[p - 1] + 1 for p in lines[0])] for a in t.arrays]
    reps = [None] * 7
    for x in range(t.size):
        c = coset_of_elem[x]
        if reps[c] is None:
            reps[c] = x
    H = t.group_from_indices(H_elems)
    line_orbit = Orbit("cosets", 8, 7, subgroup=H, coset_reps=reps, coset_of=coset_of_elem)
    return Representation(G, nat.orbits + [line_orbit], stabs)


def fano_point_kind(p: int) -> str:
    return "point" if p <= 7 else "line"


def fano_line(p: int) -> frozenset[int]:
    return fano_lines()[p - 8]


def matches_incidence_pattern(points: list[int]) -> bool:
    """Two points and two lines of the degree-14 action, each point on one of the
    lines and each line through one of the points."""
    pts = [p for p in points if p <= 7]
    lns = [fano_line(p) for p in points if p > 7]
    if len(pts) != 2 or len(lns) != 2:
        return False
    return all(any(p in ln for ln in lns) for p in pts) and all(any(p in ln for p in pts) for ln in lns)


# -- closed forms ---------------------------------------------------------------

class DomainError(ValueError):
    pass


def popcount_base2(n: int) -> int:
    if n < 1:
        raise DomainError("n must be >= 1")
    return bin(n).count("1")


def closed_l_Sn(n: int) -> int:
    """Longest subgroup chain of S_n: ceil(3n/2) - (number of 1 bits of n) - 1."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return (3 * n + 1) // 2 - popcount_base2(n) - 1


def closed_dprime_Sn(n: int) -> int:
    if n <= 3:
        raise DomainError("closed form for d'(S_n) holds only for n > 3")
    return n // 2


def closed_mu_Sn(n: int) -> int:
    if n <= 3:
        raise DomainError("closed form for mu(S_n) is only used for n > 3")
    return n - 1


# -- group specs ----------------------------------------------------------------

@dataclass(frozen=True)
class GroupSpec:
    kind: str  # symmetric, alternating, cyclic, dihedral, quaternion8, psl27, file
    n: int | None = None
    path: str | None = None

    @property
    def simple(self) -> bool:
        """Catalog marker for non-abelian simple groups."""
        return self.kind == "psl27" or (self.kind == "alternating" and (self.n or 0) >= 5)

    @property
    def name(self) -> str:
        prefix = {"symmetric": "S", "alternating": "A", "cyclic": "C", "dihedral": "D"}
        if self.kind in prefix:
            return f"{prefix[self.kind]}{self.n}"
        if self.kind == "quaternion8":
            return "Q8"
        if self.kind == "psl27":
            return "PSL27"
        return f"file:{self.path}"

    def expected_order(self) -> int | None:
        return {
            "symmetric": lambda: factorial(self.n),
            "alternating": lambda: max(1, factorial(self.n) // 2),
            "cyclic": lambda: self.n,
            "dihedral": lambda: 2 * self.n,
            "quaternion8": lambda: 8,
            "psl27": lambda: 168,
        }.get(self.kind, lambda: None)()

    def build(self) -> PermGroup:
        if self.kind == "symmetric":
            return make_symmetric(self.n)
        if self.kind == "alternating":
            return make_alternating(self.n)
        if self.kind == "cyclic":
            return make_cyclic(self.n)
        if self.kind == "dihedral":
            return make_dihedral(self.n)
        if self.kind == "quaternion8":
            return make_quaternion8()
        if self.kind == "psl27":
            return make_psl27()
        return read_group_file(self.path)


_SPEC_RE = re.compile(r"^(S|A|C|D)(\d+)$")


def parse_group_spec(text: str) -> GroupSpec:
    """``S4``, ``A5``, ``C6``, ``D4``, ``Q8``, ``PSL27`` or ``file:<path>``."""
    s = text.strip()
    if s.lower().startswith("file:"):
        return GroupSpec("file", path=s[5:])
    u = s.upper().replace("(", "").replace(")", "").replace(",", "")
    if u in ("Q8", "QUATERNION8"):
        return GroupSpec("quaternion8")
    if u in ("PSL27", "PSL32", "GL32"):
        return GroupSpec("psl27")
    m = _SPEC_RE.match(u)
    if not m:
        raise UnknownGroupError(f"unknown group spec {text!r}")
    kind = {"S": "symmetric", "A": "alternating", "C": "cyclic", "D": "dihedral"}[m.group(1)]
    n = int(m.group(2))
    if n < 1 or (kind == "dihedral" and n < 2) or (kind in ("symmetric", "alternating") and n > 8):
        raise UnknownGroupError(f"group spec {text!r} out of range")
    if kind == "alternating" and n < 3:
        raise UnknownGroupError("alternating groups need n >= 3")
    return GroupSpec(kind, n)


def read_group_file(path) -> PermGroup:
    """Group file: ``degree n`` then one generator per line in cycle notation; ``#`` comments."""
    degree = None
    gens = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if degree is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "degree":
                raise ValueError(f"{path}: first line must be 'degree n'")
            degree = int(parts[1])
            continue
        gens.append(parse_cycles(line, degree))
    if degree is None:
        raise ValueError(f"{path}: missing degree line")
    return PermGroup(gens, degree, name=f"file:{path}")


def write_group_file(G: PermGroup, path) -> None:
    from .perm import format_cycles

    lines = [f"degree {G.degree}"] + [format_cycles(g) for g in G.generators]
    Path(path).write_text("\n".join(lines) + "\n")


BUILTIN_SPECS = (
    ["S1", "S2", "S3", "S4", "S5", "A3", "A4", "A5"]
    + [f"C{n}" for n in (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12)]
    + [f"D{n}" for n in (2, 3, 4, 5, 6, 8, 10, 12)]
    + ["Q8", "PSL27"]
)


def builtin_catalog(max_order: int | None = None) -> list[GroupSpec]:
    specs = [parse_group_spec(s) for s in BUILTIN_SPECS]
    if max_order is not None:
        specs = [s for s in specs if s.expected_order() <= max_order]
    return specs
