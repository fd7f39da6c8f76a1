import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from permbases.catalog import (
    builtin_catalog,
    fano_incidence_rep,
    make_cyclic,
    make_psl27,
    make_quaternion8,
    make_symmetric,
    quaternion_element,
)
from permbases.group import PermGroup
from permbases.lattice import get_lattice
from permbases.measures import is_base, is_minimal_base, max_minimal_base, mu_prime
from permbases.perm import parse_cycles
from permbases.rep import coset_action, natural_representation
from permbases.semilattice import (
    FamilyError,
    JoinFamily,
    MeetFamily,
    exists_lattice_embedding,
    hunt_gap,
    independent_set_to_join,
    is_independent,
    is_lattice_embedding,
    join_subsets_distinct,
    join_to_independent_set,
    join_to_meet,
    max_boolean_join,
    max_boolean_meet,
    meet_subsets_distinct,
    meet_to_join,
    meet_to_minimal_base,
    minimal_base_to_meet,
    verify_join_embedding,
    verify_meet_embedding,
)

SMALL = [s.build() for s in builtin_catalog(24) if len(get_lattice(s.build())) <= 40]


def P(text, n):
    return parse_cycles(text, n)


def _q8_pair():
    Q = make_quaternion8()
    return Q, Q.subgroup([quaternion_element("i")]), Q.subgroup([quaternion_element("j")])


def _s3_pair():
    S3 = make_symmetric(3)
    return S3, S3.subgroup([P("(1 2)", 3)]), S3.subgroup([P("(1 3)", 3)])


def test_verify_examples():
    Q, Ci, Cj = _q8_pair()
    assert verify_meet_embedding(Q, [Ci, Cj]) and verify_join_embedding(Q, [Ci, Cj])
    S3, A, B = _s3_pair()
    assert verify_meet_embedding(S3, [A, B])
    assert not verify_meet_embedding(S3, [A, A]) and not verify_join_embedding(S3, [A, A])
    with pytest.raises(FamilyError):
        verify_meet_embedding(S3, [make_symmetric(4)])


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_per_index_criterion_matches_brute_force(G):
    L = get_lattice(G)
    subs = [L.subgroup(i) for i in range(len(L))]
    rng = random.Random(len(L))
    families = [list(c) for k in (1, 2, 3) for c in combinations(range(len(L)), k)]
    if len(families) > 400:
        families = rng.sample(families, 400)
    families += [rng.sample(range(len(L)), 4) for _ in range(100) if len(L) >= 4]
    for fam in families:
        members = [subs[i] for i in fam]
        assert verify_meet_embedding(G, members) == meet_subsets_distinct(G, members)
    for fam in families[::4]:
        members = [subs[i] for i in fam]
        assert verify_join_embedding(G, members) == join_subsets_distinct(G, members)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_meet_criterion_against_oracle(G, data):
    L = get_lattice(G)
    n = data.draw(st.integers(1, 4))
    fam = data.draw(st.lists(st.integers(0, len(L) - 1), min_size=n, max_size=n))
    t = L.table
    sets = [frozenset(t.arrays[i] for i in L.nodes[k].elems) for k in fam]
    full = frozenset(t.arrays)
    inters = {oracles.intersect(full, [sets[i] for i in I])
              for k in range(n + 1) for I in combinations(range(n), k)}
    assert verify_meet_embedding(G, [L.subgroup(k) for k in fam]) == (len(inters) == 2 ** n)


def _same(A, B):
    return [a.order for a in A] == [b.order for b in B] and all(a.same_group(b) for a, b in zip(A, B))


def test_conversion_examples():
    S3, A, B = _s3_pair()
    join = independent_set_to_join(S3, [P("(1 2)", 3), P("(1 3)", 3)])
    meet = join_to_meet(join)
    assert meet.n == 2 and verify_meet_embedding(S3, meet)
    assert _same(meet.members, [B, A])

    Q, Ci, Cj = _q8_pair()
    meet = join_to_meet(JoinFamily(Q, [Ci, Cj]))
    assert _same(meet.members, [Cj, Ci])

    C5 = make_cyclic(5)
    one = join_to_meet(JoinFamily(C5, [C5]))
    assert one.n == 1 and one.members[0].order == 1
    back = meet_to_join(one)
    assert back.n == 1 and back.members[0].order == 5

    with pytest.raises(FamilyError):
        join_to_meet(JoinFamily(S3, [A, A]))
    with pytest.raises(FamilyError):
        meet_to_join(MeetFamily(S3, [A, A]))


def test_independent_set_examples():
    S4 = make_symmetric(4)
    cox = [P("(1 2)", 4), P("(2 3)", 4), P("(3 4)", 4)]
    fam = independent_set_to_join(S4, cox)
    assert fam.n == 3 and verify_join_embedding(S4, fam)
    assert oracles.is_independent([g.array for g in cox], 4)
    C6 = make_cyclic(6)
    g = C6.generators[0]
    assert independent_set_to_join(C6, [g ** 3, g ** 2]).n == 2
    assert independent_set_to_join(S4, [P("(1 2 3)", 4)]).n == 1
    with pytest.raises(FamilyError):
        independent_set_to_join(S4, [P("(1 2)", 4), P("(1 2)", 4)])
    with pytest.raises(FamilyError):
        is_independent(S4, [P("(1 2)", 5)])


def test_minimal_base_to_meet_examples():
    rep = fano_incidence_rep()
    r = max_minimal_base(rep)
    base = [rep.point_from_label(s) for s in r.witness["base"]]
    fam = minimal_base_to_meet(rep, base)
    assert fam.n == 4 and verify_meet_embedding(rep.group, fam)
    inter = set(rep.group.table.arrays)
    for K in fam.members:
        inter &= {e.array for e in K.elements()}
    assert len(inter) == 1

    nat = natural_representation(make_symmetric(4))
    fam = minimal_base_to_meet(nat, [1, 2, 3])
    assert fam.n == 3 and [K.order for K in fam.members] == [6, 6, 6]

    C2 = make_cyclic(2)
    assert minimal_base_to_meet(natural_representation(C2), [1]).n == 1
    with pytest.raises(FamilyError):
        minimal_base_to_meet(nat, [1, 2, 3, 4])


def test_meet_to_minimal_base_rejects_non_normal_minimum():
    S3, A, B = _s3_pair()
    with pytest.raises(FamilyError):
        meet_to_minimal_base(S3, [A])
    rep, base = meet_to_minimal_base(S3, [A, B])
    assert is_minimal_base(rep, base.points)


@pytest.mark.parametrize("G", [make_symmetric(4), make_psl27(), make_quaternion8(), make_cyclic(12)],
                         ids=lambda G: G.name)
def test_round_trips(G):
    meet = max_boolean_meet(G, require_normal_min=True)
    rep, base = meet_to_minimal_base(G, meet.family)
    assert len(base) == meet.n and is_minimal_base(rep, base.points)
    # kernel of the constructed action is the (normal) bottom of the family
    inter = set(G.table.arrays)
    for K in meet.family:
        inter &= {e.array for e in K.elements()}
    assert {e.array for e in rep.kernel.elements()} == inter
    # the stabilizers of the constructed base give back a family of the same size
    again = minimal_base_to_meet(rep, base)
    assert again.n == meet.n and verify_meet_embedding(G, again)
    assert is_base(rep, base.points)

    join = max_boolean_join(G)
    fam = JoinFamily(G, join.family)
    m = join_to_meet(fam)
    assert m.n == join.n and meet_to_join(m).n == join.n
    elems = join_to_independent_set(G, fam)
    assert len(elems) == join.n and is_independent(G, elems)
    assert independent_set_to_join(G, elems).n == join.n


def test_boolean_meet_examples():
    assert max_boolean_meet(make_psl27(), True).n == 4
    assert max_boolean_meet(make_symmetric(4), True).n == 3
    for flag in (True, False):
        assert max_boolean_meet(make_cyclic(7), flag).n == 1


def test_boolean_join_examples():
    assert max_boolean_join(make_symmetric(4)).n == 3
    assert max_boolean_join(make_quaternion8()).n == 2
    assert max_boolean_join(PermGroup([], 1)).n == 0


@pytest.mark.parametrize("spec", builtin_catalog(60), ids=lambda s: s.name)
def test_join_max_equals_mu_prime_and_meet_monotone(spec):
    G = spec.build()
    assert max_boolean_join(G).n == mu_prime(G).value
    assert max_boolean_meet(G, True).n <= max_boolean_meet(G, False).n


def test_lattice_embedding_examples():
    assert exists_lattice_embedding(make_quaternion8(), 2).n == 0
    S3 = make_symmetric(3)
    r = exists_lattice_embedding(S3, 2)
    assert r.n == 2 and is_lattice_embedding(get_lattice(S3), [get_lattice(S3).node_of(H) for H in r.family])
    L = get_lattice(S3)
    atoms = [L.node_of(S3.subgroup([P("(1 2)", 3)])), L.node_of(S3.subgroup([P("(1 2 3)", 3)]))]
    assert is_lattice_embedding(L, atoms)
    for spec in builtin_catalog(24):
        G = spec.build()
        if G.order > 1:
            assert exists_lattice_embedding(G, 1).n == 1


def test_unanchored_q8_sublattice_is_rejected():
    Q, Ci, Cj = _q8_pair()
    L = get_lattice(Q)
    # {<-1>, <i>, <j>, Q8} is closed under both operations but its bottom is not 1
    assert not is_lattice_embedding(L, [L.node_of(Ci), L.node_of(Cj)])


def test_lattice_embedding_brute_force_small():
    for spec in builtin_catalog(24):
        G = spec.build()
        L = get_lattice(G)
        for n in (2, 3):
            found = exists_lattice_embedding(G, n).n == n
            brute = any(is_lattice_embedding(L, list(c)) for c in combinations(range(1, len(L)), n))
            assert found == brute, (G.name, n)


def test_hunt_examples():
    g = hunt_gap(make_symmetric(4))
    assert (g.b2, g.mu_prime, g.strict_gap) == (3, 3, False)
    g = hunt_gap(make_psl27())
    assert g.b2 == 4 and not g.strict_gap and g.exact
    g = hunt_gap(make_cyclic(5))
    assert (g.b2, g.mu_prime, g.strict_gap) == (1, 1, False)


def test_transitive_coset_families_are_verified():
    # stabilizers of a minimal base in a coset action form a verified meet family
    G = make_psl27()
    L = get_lattice(G)
    for c in L.class_reps[1:-1]:
        rep = coset_action(G, L.subgroup(c))
        r = max_minimal_base(rep)
        base = [rep.point_from_label(s) for s in r.witness["base"]]
        assert verify_meet_embedding(G, minimal_base_to_meet(rep, base))
