"""Count size-4 minimal bases of the degree-14 point/line action of PSL(2,7)
and how many follow the two-points-two-lines incidence pattern."""

from collections import Counter
from itertools import combinations

from permbases.catalog import fano_incidence_rep, matches_incidence_pattern
from permbases.measures import is_minimal_base


def main() -> None:
    rep = fano_incidence_rep()
    sizes = Counter()
    pattern = 0
    for pts in combinations(range(1, rep.degree + 1), 4):
        if is_minimal_base(rep, list(pts)):
            sizes[sum(p <= 7 for p in pts)] += 1
            pattern += matches_incidence_pattern(list(pts))
    total = sum(sizes.values())
    print(f"{total} minimal bases of size 4; by number of points: {dict(sorted(sizes.items()))}")
    print(f"{pattern} follow the incidence pattern")


if __name__ == "__main__":
    main()
