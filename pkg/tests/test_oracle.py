import random

import pytest
from hypothesis import given, strategies as st

from chrono_kh.coeff import Laurent
from chrono_kh.diagram import braid_closure, disjoint_union, mirror, parse_diagram
from chrono_kh.oracle import UnionFind, count_circles, state_sum

from corpus import LEFT_TREFOIL, corpus, reidemeister_pairs

LOOP = Laurent({1: 1, -1: 1})


def jones_to_q(coeffs):
    """Unnormalised Jones polynomial in q from t-exponents (knots, t = q^2)."""
    return LOOP * Laurent({2 * e: c for e, c in coeffs.items()})


def test_unknot():
    assert state_sum(parse_diagram("PD[]")) == LOOP
    assert state_sum(corpus()["unknot_kink_pos"]) == LOOP
    assert state_sum(corpus()["unknot_kink_neg"]) == LOOP


def test_left_trefoil():
    assert state_sum(parse_diagram(LEFT_TREFOIL)) == Laurent({-1: 1, -3: 1, -5: 1, -9: -1})


def test_figure_eight_and_6_1_match_jones():
    assert state_sum(corpus()["figure_eight"]) == jones_to_q({2: 1, 1: -1, 0: 1, -1: -1, -2: 1})
    assert state_sum(corpus()["knot_6_1"]) == jones_to_q({-4: 1, -3: -1, -2: 1, -1: -2, 0: 2, 1: -1, 2: 1})


def test_hopf_links():
    assert state_sum(corpus()["hopf_pos"]) == Laurent({0: 1, 2: 1, 4: 1, 6: 1})
    assert state_sum(corpus()["hopf_neg"]) == Laurent({0: 1, -2: 1, -4: 1, -6: 1})


def test_disjoint_union_multiplies():
    a, b = corpus()["trefoil_left"], corpus()["figure_eight"]
    assert state_sum(disjoint_union(a, b)) == state_sum(a) * state_sum(b)


@pytest.mark.parametrize("name", sorted(corpus()))
def test_mirror_inverts_q(name):
    d = corpus()[name]
    assert state_sum(mirror(d)) == state_sum(d).invert_variable()


@pytest.mark.parametrize("move, a, b", reidemeister_pairs())
def test_reidemeister_invariance(move, a, b):
    assert state_sum(a) == state_sum(b)


@given(st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=6))
def test_value_at_q_equal_one(word):
    # at q = 1 each component contributes 2
    d = braid_closure(word, 3)
    assert sum(c for _, c in state_sum(d).pairs()) == 2 ** d.n_components


def test_count_circles_extremes():
    x = parse_diagram(LEFT_TREFOIL).pd.crossings
    assert count_circles(x, 0) == 3
    assert count_circles(x, 7) == 2
    assert count_circles([], 0, free=2) == 2


def test_union_find():
    uf = UnionFind(range(6))
    uf.union(0, 1)
    uf.union(2, 3)
    uf.union(1, 3)
    assert uf.count() == 3
    assert uf.find(0) == uf.find(2)
