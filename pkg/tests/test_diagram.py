import json

import pytest
from hypothesis import given, strategies as st

from chrono_kh.diagram import (PdCode, PdError, braid_closure, checkerboard, disjoint_union,
                               flip_arrow, flip_crossing, linking_number, make_diagram, mirror,
                               parse_diagram, parse_pd, reverse_component, smooth)
from chrono_kh.oracle import state_sum

from corpus import FIGURE_EIGHT, HOPF_NEG, LEFT_TREFOIL, STEVEDORE, corpus

braids = st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=5)


def test_parse_knot_theory_text():
    d = parse_diagram(LEFT_TREFOIL)
    assert d.n_crossings == 3
    assert d.crossing_signs == (-1, -1, -1)
    assert d.n_components == 1
    assert d.arrows == (0, 0, 0)


def test_parse_json_with_arrows():
    obj = {"pd": [[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]], "arrows": [0, 1, 1]}
    d = parse_diagram(json.dumps(obj))
    assert d.arrows == (0, 1, 1)
    assert parse_diagram(json.dumps(d.to_json())) == d


def test_empty_pd_is_one_circle():
    d = parse_diagram("PD[]")
    assert d.n_crossings == 0
    assert d.n_components == 1


def test_whitespace_tolerated():
    assert parse_pd(" PD[ X[1, 1, 2, 2] ]\n").crossings == ((1, 1, 2, 2),)


@pytest.mark.parametrize("text, needle", [
    ("PD[X[1,2,3,4]]", "occurs 1 times"),
    ("PD[X[1,1,1,2]]", "occurs"),
    ("PD[X[0,0,1,1]]", "positive"),
    ("PD[X[1,2,3]]", "malformed"),
    ("X[1,1,2,2]", "expected"),
    ("{\"pd\": [[1,1,2]]}", "quadruples"),
    ("{\"pd\": [[1,1,2,2]], \"arrows\": [2]}", "arrows"),
    ("PD[X[1,2,3,4],X[2,3,1,4]]", "planar"),
])
def test_parse_errors(text, needle):
    with pytest.raises(PdError, match=needle):
        parse_diagram(text)


def test_inconsistent_orientation_names_the_edge():
    # edge 2 would have to run into both of its ends
    with pytest.raises(PdError, match="edge"):
        parse_diagram("PD[X[1,2,2,1],X[3,3,4,4],X[5,5,6,6]]".replace("X[3,3,4,4]", "X[3,2,4,4]"))


def test_kink_signs():
    assert parse_diagram("PD[X[1,1,2,2]]").crossing_signs == (1,)
    assert parse_diagram("PD[X[1,2,2,1]]").crossing_signs == (-1,)


def test_hopf_links():
    neg = parse_diagram(HOPF_NEG)
    pos = braid_closure([1, 1])
    assert neg.n_components == pos.n_components == 2
    assert linking_number(neg, 0) == -1
    assert linking_number(pos, 0) == 1


def test_braid_closure_basics():
    assert braid_closure([1, 1, 1]).crossing_signs == (1, 1, 1)
    assert braid_closure([]).n_components == 1
    assert braid_closure([1], 3).free_circles == 1
    with pytest.raises(PdError):
        braid_closure([0])
    with pytest.raises(PdError):
        braid_closure([3], 2)


@given(braids)
def test_braid_signs_follow_generators(word):
    d = braid_closure(word, 3)
    assert d.crossing_signs == tuple(1 if g > 0 else -1 for g in word)


@given(braids)
def test_mirror_negates_signs_and_is_involutive(word):
    d = braid_closure(word, 3)
    m = mirror(d)
    assert m.crossing_signs == tuple(-s for s in d.crossing_signs)
    mm = mirror(m)
    assert mm.pd == d.pd
    assert mm.crossing_signs == d.crossing_signs


@given(braids, st.data())
def test_flip_crossing_changes_one_sign(word, data):
    d = braid_closure(word, 3)
    x = data.draw(st.integers(0, d.n_crossings - 1))
    f = flip_crossing(d, x)
    want = list(d.crossing_signs)
    want[x] = -want[x]
    assert list(f.crossing_signs) == want
    assert flip_crossing(f, x).crossing_signs == d.crossing_signs


@given(braids, st.data())
def test_reverse_component_twice_is_identity(word, data):
    d = braid_closure(word, 3)
    k = data.draw(st.integers(0, len(d.components) - 1))
    r = reverse_component(reverse_component(d, k), k)
    assert r.crossing_signs == d.crossing_signs
    assert r.pd == d.pd


def test_reverse_one_hopf_component_flips_both_signs():
    d = braid_closure([1, 1])
    r = reverse_component(d, 0)
    assert r.crossing_signs == (-1, -1)
    assert linking_number(r, 0) == -1


def test_full_reversal_keeps_signs():
    d = parse_diagram(STEVEDORE)
    r = reverse_component(d, 0)
    assert r.crossing_signs == d.crossing_signs


def test_flip_arrow():
    d = parse_diagram(LEFT_TREFOIL)
    assert flip_arrow(d, 1).arrows == (0, 1, 0)
    with pytest.raises(PdError):
        d.with_arrows([0, 2, 0])


def test_smooth_oriented():
    d = braid_closure([1, 1])
    z = smooth(d, 0)
    assert z.n_crossings == 1
    assert z.n_components == 1
    t = smooth(parse_diagram(LEFT_TREFOIL), 0)
    assert t.n_components == 2          # oriented smoothing of a trefoil crossing: Hopf link
    assert t.crossing_signs == (-1, -1)


def test_disjoint_union_multiplies_state_sum():
    a = parse_diagram(LEFT_TREFOIL)
    b = parse_diagram(FIGURE_EIGHT)
    u = disjoint_union(a, b)
    assert u.n_components == 2
    assert state_sum(u) == state_sum(a) * state_sum(b)


@pytest.mark.parametrize("name", sorted(corpus()))
def test_checkerboard_is_proper(name):
    d = corpus()[name]
    if not d.n_crossings:
        return
    col = checkerboard(d.pd)
    # the four corners around a crossing alternate in colour
    for x in range(d.n_crossings):
        cs = [col[(x, q)] for q in range(4)]
        assert cs[0] != cs[1] and cs[0] == cs[2] and cs[1] == cs[3]


def test_make_diagram_checks_arrow_count():
    with pytest.raises(PdError):
        make_diagram(PdCode(((1, 1, 2, 2),)), (0, 0))
