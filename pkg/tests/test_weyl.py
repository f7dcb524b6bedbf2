import random
from collections import deque

import pytest
from hypothesis import given, strategies as st

from rsverify.matgroups import WeightVector
from rsverify.weyl import (
    D6,
    MAIN_PERM,
    MAIN_WORD,
    ORBIT_TABLE,
    P_STD,
    Q_STD,
    V0,
    V1,
    V2,
    ParabolicSubset,
    PrimeFieldElt,
    WeylElt,
    coset_census,
    conjugate_intersection,
    factorization_check,
    from_word,
    has_left_descent,
    has_right_descent,
    min_double_coset_reps,
    orbit_census,
    parabolic_orbits_on_quadric,
    quadric_points,
    shortest_rep,
    signature,
    simple,
    verify_main_intersection,
    w_,
)

E = WeylElt.identity()
#: D6 Dynkin edges in this numbering: 1-2-3-4-5 and 4-6
EDGES = {(1, 2), (2, 3), (3, 4), (4, 5), (4, 6)}


def bond(i, j):
    return 3 if (min(i, j), max(i, j)) in EDGES else 2


@pytest.fixture(scope="module")
def bfs_lengths():
    """Word length of every element of W(D6) by breadth-first search."""
    dist = {E: 0}
    q = deque([E])
    gens = [simple(i) for i in range(1, 7)]
    while q:
        w = q.popleft()
        for s in gens:
            v = w * s
            if v not in dist:
                dist[v] = dist[w] + 1
                q.append(v)
    return dist


def test_main_word_is_displayed_permutation():
    w, red = from_word(MAIN_WORD)
    assert w.perm == MAIN_PERM
    assert red and w.length() == 20


def test_empty_word_and_w1():
    w, red = from_word("")
    assert w == E and red and w.length() == 0
    assert w_("1").cycle_string() == "(1,2)(11,12)"


@pytest.mark.parametrize("i", range(1, 7))
def test_simple_reflections_are_involutions(i):
    s = simple(i)
    assert s * s == E
    assert s.length() == 1 and s.is_self_dual() and s.is_even()


@pytest.mark.parametrize("i,j", [(i, j) for i in range(1, 7) for j in range(i + 1, 7)])
def test_braid_relations(i, j):
    m = bond(i, j)
    a, b = simple(i), simple(j)
    lhs, rhs = E, E
    for k in range(m):
        lhs = lhs * (a if k % 2 == 0 else b)
        rhs = rhs * (b if k % 2 == 0 else a)
    assert lhs == rhs


def test_group_order_and_length_oracle(bfs_lengths):
    assert len(bfs_lengths) == 2 ** 5 * 720
    assert max(bfs_lengths.values()) == 30
    assert all(w.length() == d for w, d in bfs_lengths.items())


@given(st.lists(st.integers(1, 6), max_size=12))
def test_is_reduced_matches_length(word):
    w, red = from_word(word)
    assert red == (w.length() == len(word))
    assert w.is_self_dual() and w.is_even()


@given(st.lists(st.integers(1, 6), max_size=10), st.lists(st.integers(1, 6), max_size=10))
def test_multiplication_is_word_concatenation(a, b):
    assert w_(a) * w_(b) == w_(a + b)
    assert (w_(a) * w_(a).inverse()) == E


@pytest.mark.parametrize("i", range(1, 7))
def test_reflection_negates_its_root(i):
    a = D6.simple_root(i)
    assert simple(i).act(a) == -a


def test_act_is_a_homomorphism():
    rng = random.Random(3)
    for _ in range(10):
        u = w_([rng.randint(1, 6) for _ in range(8)])
        v = w_([rng.randint(1, 6) for _ in range(8)])
        wt = WeightVector(tuple(rng.randint(-3, 3) for _ in range(7)))
        assert (u * v).act(wt) == u.act(v.act(wt))


def test_shortest_rep_examples():
    assert shortest_rep(E, P_STD, Q_STD) == E
    for i in P_STD:
        assert shortest_rep(simple(i), P_STD, Q_STD) == E
    w = w_(MAIN_WORD)
    assert shortest_rep(w, P_STD, Q_STD) == w


def test_shortest_rep_lands_on_a_census_element():
    reps = set(min_double_coset_reps())
    rng = random.Random(7)
    for _ in range(20):
        w = w_([rng.randint(1, 6) for _ in range(15)])
        assert shortest_rep(w, P_STD, Q_STD) in reps


def test_coset_census():
    rep = coset_census()
    assert rep.status == "pass"
    assert rep.details["count"] == 25
    assert rep.details["methods_agree"] and rep.details["signatures_distinct"]
    assert signature(E) == (3, 1, 0, 0)


def test_census_has_no_descents():
    for w in min_double_coset_reps(method="descent"):
        assert not has_left_descent(w, P_STD) and not has_right_descent(w, Q_STD)


def test_factorization():
    rep = factorization_check()
    assert rep.status == "pass", rep.details
    assert rep.details["lengths"] == {"w1": 3, "w2": 7, "w3": 10, "w": 20}
    assert rep.details["w3_prime_length"] == 12


def test_parabolic_blocks():
    assert P_STD.blocks() == [0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3]
    assert Q_STD.blocks() == [0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2]
    with pytest.raises(NotImplementedError):
        ParabolicSubset({6}).blocks()


def test_main_intersection():
    rep = verify_main_intersection()
    assert rep.status == "pass"
    assert rep.details["free"] == ["y7", "y8"] and rep.details["dimension"] == 2


def test_identity_against_Q_keeps_all_of_UQ():
    rep = conjugate_intersection(E, Q_STD)
    assert rep.details["dimension"] == 22


def test_prime_field():
    a, b = PrimeFieldElt(3, 7), PrimeFieldElt(5, 7)
    assert int(a + b) == 1 and int(a * b) == 1 and int(a - b) == 5
    assert int(a / b) == int(a * b.inverse()) == 2
    with pytest.raises(ZeroDivisionError):
        PrimeFieldElt(0, 5).inverse()
    with pytest.raises(ValueError):
        a + PrimeFieldElt(1, 5)


@pytest.mark.parametrize("p", [3, 5])
def test_quadric_size(p):
    # split quadric in 6 variables: p^5 - p^2 points with Q(v) = 1
    assert len(quadric_points(p)) == p ** 5 - p ** 2


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("S", sorted(ORBIT_TABLE, key=lambda s: (len(s), sorted(s))))
def test_orbit_table(p, S):
    rep = orbit_census(p, S)
    assert rep.status == "pass", rep.details
    assert rep.details["orbits"] == len(ORBIT_TABLE[S])


def test_orbit_examples_p5():
    label, sizes, _ = parabolic_orbits_on_quadric(5, ())
    assert len({label[V0], label[V1], label[V2]}) == 3 == len(sizes)
    label, sizes, _ = parabolic_orbits_on_quadric(5, (2,))
    assert len(sizes) == 2 and label[V0] != label[V1] and label[V2] in (label[V0], label[V1])
    _, sizes, _ = parabolic_orbits_on_quadric(5, (1, 2, 3))
    assert len(sizes) == 1
