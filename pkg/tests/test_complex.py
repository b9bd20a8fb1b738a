import random

import pytest

from chrono_kh.coeff import F2, LAMBDA, Z_EV, Z_ODD, Laurent
from chrono_kh.complex import (ChainComplex, ChainMap, bracket_complex, build_complex, chain_ranks,
                               cone, cone_comparison, dual, euler_characteristic, skein_rank_defects,
                               specialize, verify_chain_map, verify_d_squared, verify_homogeneous)
from chrono_kh.cube import Cube
from chrono_kh.diagram import braid_closure, parse_diagram
from chrono_kh.frobenius import covering_system, dotted_system
from chrono_kh.homology import homology
from chrono_kh.oracle import state_sum

from corpus import FIGURE_EIGHT, HOPF_NEG, LEFT_TREFOIL, corpus

NAMES = sorted(corpus())


def lambda_complex(d):
    c = Cube(d)
    return c, build_complex(c, c.eps, covering_system())


def same(a: ChainComplex, b: ChainComplex) -> bool:
    return a.groups == b.groups and a.qdeg == b.qdeg and a.d == b.d


def test_unknot_complex():
    _, cx = lambda_complex(parse_diagram("PD[]"))
    assert cx.degrees == [0]
    assert cx.rank(0) == 2
    assert not cx.d.get(0)
    assert sorted(cx.qdeg.values()) == [-1, 1]


def test_trefoil_chain_ranks():
    _, cx = lambda_complex(parse_diagram(LEFT_TREFOIL))
    assert [cx.rank(i) for i in range(-3, 1)] == [8, 12, 6, 4]


def test_generator_order_is_lexicographic():
    _, cx = lambda_complex(parse_diagram(LEFT_TREFOIL))
    for gs in cx.groups.values():
        keys = [(g.tag[0], g.word) for g in gs]
        assert keys == sorted(keys)


@pytest.mark.parametrize("name", NAMES)
def test_d_squared_vanishes(name):
    _, cx = lambda_complex(corpus()[name])
    assert verify_d_squared(cx) == []
    for spec in (Z_EV, Z_ODD, F2):
        assert verify_d_squared(specialize(cx, spec)) == []


@pytest.mark.parametrize("name", ["trefoil_left", "figure_eight", "hopf_pos", "knot_6_1"])
def test_d_squared_dotted(name):
    c = Cube(corpus()[name])
    assert verify_d_squared(build_complex(c, c.eps, dotted_system())) == []


def test_negated_sign_breaks_d_squared():
    c = Cube(parse_diagram(FIGURE_EIGHT))
    eps = dict(c.eps)
    key = sorted(eps)[3]
    eps[key] = eps[key].negate()
    assert verify_d_squared(build_complex(c, eps, covering_system())) != []


@pytest.mark.parametrize("name", NAMES)
def test_entries_are_homogeneous_units(name):
    _, cx = lambda_complex(corpus()[name])
    assert verify_homogeneous(cx) == []
    for cols in cx.d.values():
        for col in cols.values():
            for v in col.values():
                assert v.as_unit() is not None


@pytest.mark.parametrize("name", [n for n in NAMES if corpus()[n].n_crossings <= 6])
def test_specialize_commutes_with_build(name):
    c, cx = lambda_complex(corpus()[name])
    for spec in (Z_EV, Z_ODD, F2):
        assert same(specialize(cx, spec), build_complex(c, c.eps, covering_system(), spec))


@pytest.mark.parametrize("name", NAMES)
def test_euler_characteristic_matches_state_sum(name):
    d = corpus()[name]
    _, cx = lambda_complex(d)
    assert euler_characteristic(cx) == state_sum(d)


def test_unknot_euler():
    _, cx = lambda_complex(parse_diagram("PD[X[1,1,2,2]]"))
    assert euler_characteristic(cx) == Laurent({1: 1, -1: 1})


def test_euler_ignores_sign_choice():
    c, cx = lambda_complex(parse_diagram(FIGURE_EIGHT))
    eps = {k: v.negate() for k, v in c.eps.items()}
    assert euler_characteristic(build_complex(c, eps, covering_system())) == euler_characteristic(cx)


def test_dual_is_involutive_and_reflects():
    c = Cube(parse_diagram(LEFT_TREFOIL))
    cx = build_complex(c, c.eps, covering_system(), Z_ODD)
    dd = dual(dual(cx))
    assert same(dd, cx)
    dv = dual(cx)
    assert dv.degrees == sorted(-i for i in cx.degrees)
    assert verify_d_squared(dv) == []
    assert euler_characteristic(dv) == euler_characteristic(cx).invert_variable()
    assert sorted(dv.qdeg.values()) == sorted(-q for q in cx.qdeg.values())


def test_cone_of_zero_map_is_target():
    c = Cube(parse_diagram(FIGURE_EIGHT))
    cx = build_complex(c, c.eps, covering_system(), Z_EV)
    empty = ChainComplex(cx.ring, {}, {}, {})
    fm = ChainMap(empty, cx, {})
    assert verify_chain_map(fm) == []
    cn = cone(fm)
    assert cn.degrees == cx.degrees
    assert [len(cn.groups[i]) for i in cn.degrees] == [len(cx.groups[i]) for i in cx.degrees]
    assert homology(cn) == homology(cx)


@pytest.mark.parametrize("pd", ["PD[X[1,1,2,2]]", "PD[X[1,2,2,1]]", HOPF_NEG, LEFT_TREFOIL])
def test_bracket_is_cone_of_saddle_map(pd):
    c = Cube(parse_diagram(pd))
    for x in range(c.n):
        assert cone_comparison(c, c.eps, covering_system(), x) == []
        assert cone_comparison(c, c.eps, dotted_system(), x) == []


def test_bracket_degrees_are_unshifted():
    c = Cube(parse_diagram(LEFT_TREFOIL))
    br = bracket_complex(c, c.eps, covering_system())
    assert br.degrees == [0, 1, 2, 3]


@pytest.mark.parametrize("word, x", [([1, 1], 0), ([1, 1], 1), ([1, -1], 0), ([1, 1, 1], 2)])
def test_skein_sequence_ranks(word, x):
    d = braid_closure(word)
    assert skein_rank_defects(d, x, covering_system(), Z_EV) == []


def test_json_export_shape():
    c = Cube(parse_diagram("PD[X[1,1,2,2]]"))
    obj = build_complex(c, c.eps, covering_system()).to_json()
    g = obj["groups"][0]
    assert set(g) == {"i", "gens"}
    assert set(g["gens"][0]) == {"v", "word", "q"}
    r, col, val = obj["diffs"][0]["entries"][0]
    assert isinstance(r, int) and isinstance(col, int) and isinstance(val, str)
