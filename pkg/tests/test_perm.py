import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permbases.perm import Permutation, compose_all, format_cycles, parse_cycles


def perms(max_degree=9):
    return st.integers(1, max_degree).flatmap(
        lambda n: st.permutations(list(range(1, n + 1))).map(Permutation))


@pytest.mark.parametrize("text,degree,images", [
    ("(1 2 3)", 3, [2, 3, 1]),
    ("()", 4, [1, 2, 3, 4]),
    ("(1 2)(3 4)", 4, [2, 1, 4, 3]),
    ("(1,2)(3,4)", 4, [2, 1, 4, 3]),
    ("(2 4)", 5, [1, 4, 3, 2, 5]),
    ("  (1 3) ( 2 4 ) ", 4, [3, 4, 1, 2]),
])
def test_parse_examples(text, degree, images):
    assert parse_cycles(text, degree).images == images


@pytest.mark.parametrize("text,degree", [
    ("(1 5)", 4),          # out of range
    ("(0 1)", 4),
    ("(1 2)(2 3)", 4),     # repeated point
    ("(1 2", 4),           # malformed
    ("1 2", 4),
    ("(1 x)", 4),
])
def test_parse_errors(text, degree):
    with pytest.raises(ValueError):
        parse_cycles(text, degree)


def test_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation([1, 1, 2])
    with pytest.raises(ValueError):
        Permutation([])


def test_right_action_product():
    a = parse_cycles("(1 2)", 3)
    b = parse_cycles("(2 3)", 3)
    # apply a first, then b: 1 -> 2 -> 3
    assert (a * b)(1) == 3
    assert format_cycles(a * b) == "(1 3 2)"


def test_canonical_printing():
    p = parse_cycles("(4 2)(3 1 5)", 5)
    assert format_cycles(p) == "(1 5 3)(2 4)"
    assert format_cycles(Permutation.identity(3)) == "()"


@given(perms())
def test_print_parse_round_trip(p):
    assert parse_cycles(format_cycles(p), p.degree) == p
    text = format_cycles(p)
    assert format_cycles(parse_cycles(text, p.degree)) == text


@given(perms(), st.data())
def test_group_axioms(p, data):
    n = p.degree
    q = data.draw(st.permutations(list(range(1, n + 1))).map(Permutation))
    r = data.draw(st.permutations(list(range(1, n + 1))).map(Permutation))
    e = Permutation.identity(n)
    assert (p * q) * r == p * (q * r)
    assert p * p.inverse() == e and p.inverse() * p == e
    assert (p * q)(1) == q(p(1))


@given(perms(8))
def test_order_and_power(p):
    k = p.order()
    assert (p ** k).is_identity()
    assert all(not (p ** j).is_identity() for j in range(1, k))
    assert p ** -1 == p.inverse()


@settings(max_examples=30)
@given(st.lists(perms(6), min_size=1, max_size=4).filter(lambda ps: len({q.degree for q in ps}) == 1))
def test_compose_all(ps):
    expected = ps[0]
    for q in ps[1:]:
        expected = expected * q
    assert compose_all(ps, ps[0].degree) == expected


def test_cycles_sorted_by_smallest_point():
    rng = random.Random(3)
    for _ in range(50):
        imgs = list(range(1, 8))
        rng.shuffle(imgs)
        cyc = Permutation(imgs).cycles()
        assert [c[0] for c in cyc] == sorted(c[0] for c in cyc)
        assert all(c[0] == min(c) for c in cyc)
