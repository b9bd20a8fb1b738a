import dataclasses

import pytest

from chrono_kh.coeff import DOTTED, F2, H, LAMBDA, ONE, T, X, Y, Z, Z_EV, Z_ODD, Specialization
from chrono_kh.frobenius import (FrobeniusError, TensorMap, base_change, check_axioms,
                                 covering_system, dotted_system, drop_dots_hom,
                                 mixed_relation_holds, neck_cutting_identity, reduce_mod_hom,
                                 specialization_hom, torus_value, twist)

LEE = Specialization("lee", 1, 1, 1, h=0, t=1)
BAR_NATAN = Specialization("bn", 1, 1, 1, h=1, t=0)


@pytest.mark.parametrize("make", [covering_system, dotted_system])
def test_axioms_hold(make):
    rep = check_axioms(make())
    assert rep.ok, rep.failures()


def test_dotted_has_sphere_relations():
    rep = check_axioms(dotted_system())
    assert rep.results["sphere_zero"] and rep.results["dotted_sphere_one"]


def test_torus_value():
    assert torus_value(covering_system()) == Z * (X + Y)
    assert torus_value(base_change(covering_system(), Z_EV)) == 2
    assert torus_value(base_change(covering_system(), Z_ODD)) == 0


def test_one_minus_xy_kills_handle():
    sys = covering_system()
    assert mixed_relation_holds(sys)
    assert not (sys.mu @ sys.delta).is_zero()


def test_twisted_symmetries():
    sys = covering_system()
    sig = TensorMap.sigma(LAMBDA)
    assert sys.mu @ sig == sys.mu.scale(X)
    assert sig @ sys.delta == sys.delta.scale(Y)


def test_covering_structure_constants():
    sys = covering_system()
    assert sys.mu((1, 0)) == {(1,): X * Z}
    assert sys.mu((1, 1)) == {}
    assert sys.delta((0,)) == {(1, 0): ONE, (0, 1): Y * Z}


@pytest.mark.parametrize("spec, delta_plus", [
    (Z_EV, {(1, 0): 1, (0, 1): 1}),
    (Z_ODD, {(1, 0): 1, (0, 1): -1}),
])
def test_even_and_odd_algebras(spec, delta_plus):
    sys = base_change(covering_system(), spec)
    assert check_axioms(sys).ok
    assert sys.delta((0,)) == delta_plus
    assert sys.mu((1, 0)) == {(1,): 1}


def test_base_change_drops_dots_to_covering():
    dropped = base_change(dotted_system(), drop_dots_hom())
    assert dropped.same_constants(covering_system())
    assert not base_change(dotted_system(), specialization_hom(LEE)).same_constants(
        base_change(covering_system(), Z_EV))


def test_base_change_must_be_unital():
    from chrono_kh.frobenius import RingHom
    bad = RingHom("zero", LAMBDA, lambda c: c * 0)
    with pytest.raises(FrobeniusError):
        base_change(covering_system(), bad)


def test_mod2_reduction_of_even():
    sys = base_change(base_change(covering_system(), Z_EV), reduce_mod_hom(Z_EV, 2))
    assert check_axioms(sys).ok
    assert sys.same_constants(base_change(covering_system(), F2))


@pytest.mark.parametrize("spec", [LEE, BAR_NATAN])
def test_dotted_deformations(spec):
    sys = base_change(dotted_system(), spec)
    assert check_axioms(sys).ok
    assert neck_cutting_identity(sys).ok


def test_lee_multiplication():
    sys = base_change(dotted_system(), LEE)
    assert sys.mu((1, 1)) == {(0,): 1}


def test_neck_cutting():
    rep = neck_cutting_identity(dotted_system())
    assert rep.identity and rep.sphere_with_two_dots
    c1, c2, c3 = (rep.composites[k] for k in ("C1", "C2", "C3"))
    assert c1((0,)) == {(0,): ONE}
    assert c2((0,)) == {} and c2((1,)) == {(1,): ONE}
    assert c3((0,)) == {}
    assert c1((1,)) == c3((1,))


def test_neck_cutting_detects_wrong_handle():
    sys = dataclasses.replace(dotted_system(), handle=H + H)
    assert not neck_cutting_identity(sys).ok


def test_neck_cutting_needs_dots():
    with pytest.raises(FrobeniusError):
        neck_cutting_identity(covering_system())


@pytest.mark.parametrize("make, y", [
    (dotted_system, {(0,): 1}),
    (covering_system, {(0,): X}),
    (covering_system, {(0,): -Y * Z}),
])
def test_twists_keep_axioms(make, y):
    sys = twist(make(), y)
    assert check_axioms(sys).ok


def test_twist_rejects_bad_elements():
    with pytest.raises(FrobeniusError):
        twist(covering_system(), {(1,): 1})
    with pytest.raises(FrobeniusError):
        twist(base_change(covering_system(), Z_EV), {(0,): 2})


def test_broken_algebra_is_reported():
    sys = covering_system()
    bad = dataclasses.replace(sys, mu=sys.mu.scale(X + Y))
    rep = check_axioms(bad)
    assert not rep.ok
    assert "unit" in rep.failures()


def test_json_is_stable():
    assert dotted_system().dumps() == dotted_system().dumps()
    assert '"ring": "Lambda[h,t]"' in dotted_system().dumps()
