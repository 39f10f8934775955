import random

import pytest

from conftest import make_t1, make_t2, make_t3
from descent_kit.errors import (
    AutomorphismGroupFailure,
    PIndependenceFailure,
    SeparabilityFailure,
    SpecMismatch,
    UnknownAutomorphism,
    ZeroInverse,
)
from descent_kit.fields import PolyRing
from descent_kit.tower import (
    apply_sep_auto,
    elt_inverse,
    elt_mul,
    kp_decompose,
    random_element,
    tower_pth_root,
    validate_tower,
)


def test_reference_tower_shapes():
    t1, t2, t3 = make_t1(), make_t2(), make_t3()
    assert (t1.degree, t1.exponent, t1.d0) == (2, 1, 1)
    assert (t2.degree, t2.exponent, t2.d0) == (8, 2, 1)
    assert (t3.degree, t3.exponent, t3.d0) == (6, 1, 2)
    assert len(t1.basis) == 2
    assert len(t2.basis) == 8
    assert len(t3.basis) == 6


def test_defining_relations():
    t1 = make_t1()
    a1 = t1.generator("a1")
    t = t1.ring.rat(t1.ring.variable("t"))
    assert a1 * a1 == t1.scalar(t)

    t2 = make_t2()
    a2 = t2.generator("a2")
    tt = t2.ring.rat(t2.ring.variable("t"))
    assert a2 ** 4 == t2.scalar(tt)
    assert not a2 ** 2 == t2.scalar(tt)

    t3 = make_t3()
    i = t3.generator("i")
    b = t3.generator("b")
    assert i * i == t3.scalar(-t3.ring.rat_one)
    assert b ** 3 == t3.scalar(t3.ring.rat(t3.ring.variable("t")))


def test_inverse_round_trip():
    rng = random.Random(5)
    for spec in (make_t1(), make_t2(), make_t3()):
        one = spec.one()
        hits = 0
        while hits < 8:
            x = random_element(spec, rng)
            if x.is_zero():
                continue
            hits += 1
            assert x * elt_inverse(x) == one
            assert elt_mul(x, elt_inverse(x)) == one
        with pytest.raises(ZeroInverse):
            elt_inverse(spec.zero())


def test_division_and_pow():
    t3 = make_t3()
    b = t3.generator("b")
    i = t3.generator("i")
    x = (b + i) / (b + 1)
    assert x * (b + 1) == b + i
    assert b ** -2 * b ** 2 == t3.one()


def test_apply_sep_auto_conjugation():
    t3 = make_t3()
    i = t3.generator("i")
    b = t3.generator("b")
    t = t3.ring.rat(t3.ring.variable("t"))
    x = i * b + t3.scalar(t)
    y = apply_sep_auto(x, "c")
    assert y == -i * b + t3.scalar(t)
    assert apply_sep_auto(y, "c") == x
    assert apply_sep_auto(x, "id") == x
    # automorphisms are ring maps
    rng = random.Random(9)
    u, v = random_element(t3, rng), random_element(t3, rng)
    assert apply_sep_auto(u * v, "c") == apply_sep_auto(u, "c") * apply_sep_auto(v, "c")
    assert apply_sep_auto(u + v, "c") == apply_sep_auto(u, "c") + apply_sep_auto(v, "c")
    with pytest.raises(UnknownAutomorphism):
        apply_sep_auto(x, "frob")


def test_auto_table_group_structure():
    t3 = make_t3()
    assert t3.compose_autos("c", "c") == "id"
    assert t3.compose_autos("c", "id") == "c"
    assert t3.auto_inverse["c"] == "c"
    assert sorted(t3.auto_names()) == ["c", "id"]


def test_kp_decompose_reconstructs():
    for p, variables in ((2, ("t",)), (3, ("s", "t"))):
        ring = PolyRing(p, variables)
        rng = random.Random(p)
        for _ in range(10):
            num = ring.zero
            for _ in range(3):
                exps = [rng.randrange(0, 4) for _ in variables]
                num = num + ring.poly([(tuple(exps), rng.randrange(1, p))])
            den = ring.variable(0) + ring.const(1)
            x = ring.rat(num, den)
            dec = kp_decompose(ring, x)
            acc = ring.rat_zero
            for eps, c in dec.items():
                mono = ring.rat(ring.poly([(eps, 1)]))
                acc = acc + c ** p * mono
            assert acc == x


def test_tower_pth_root_examples():
    t1 = make_t1()
    t = t1.ring.rat(t1.ring.variable("t"))
    a1 = t1.generator("a1")
    assert tower_pth_root(t1.scalar(t)) == a1
    assert tower_pth_root(a1) is None

    t3 = make_t3()
    tt = t3.ring.rat(t3.ring.variable("t"))
    assert tower_pth_root(t3.scalar(tt)) == t3.generator("b")
    # (-i)^3 = i: the separable part is closed under p-th roots
    assert tower_pth_root(t3.generator("i")) == -t3.generator("i")
    # but b = y^3 has no solution: L^3 is the separable part
    assert tower_pth_root(t3.generator("b")) is None


def test_tower_pth_root_round_trip():
    rng = random.Random(17)
    for spec in (make_t1(), make_t2(), make_t3()):
        for _ in range(5):
            y = random_element(spec, rng)
            x = y ** spec.p
            assert tower_pth_root(x) == y


def test_separability_failure():
    ring = PolyRing(2, ("t",))
    t = ring.rat(ring.variable("t"))
    # y^2 + t is inseparable in characteristic 2
    with pytest.raises(SeparabilityFailure):
        validate_tower(ring, "g", [t, ring.rat_zero, ring.rat_one], {},
                       [("a1", 1, t)])


def test_reducible_minpoly_rejected():
    ring = PolyRing(3, ("t",))
    one = ring.rat_one
    zero = ring.rat_zero
    # y^2 - 1 = (y-1)(y+1), separable but reducible
    with pytest.raises(SeparabilityFailure):
        validate_tower(ring, "g", [ring.rat(2), zero, one],
                       {"c": [zero, ring.rat(2)]},
                       [("b", 1, ring.rat(ring.variable("t")))])


def test_automorphism_group_failures():
    ring = PolyRing(3, ("t",))
    one = ring.rat_one
    zero = ring.rat_zero
    minpoly = [one, zero, one]
    insep = [("b", 1, ring.rat(ring.variable("t")))]
    with pytest.raises(AutomorphismGroupFailure):
        validate_tower(ring, "i", minpoly, {}, insep)  # missing conjugation
    with pytest.raises(AutomorphismGroupFailure):
        # image equal to the identity's root image
        validate_tower(ring, "i", minpoly, {"c": [zero, one]}, insep)
    with pytest.raises(AutomorphismGroupFailure):
        # y + 1 is not a root of y^2 + 1
        validate_tower(ring, "i", minpoly, {"c": [one, one]}, insep)


def test_p_independence_failures():
    ring = PolyRing(2, ("s", "t"))
    s = ring.rat(ring.variable("s"))
    t = ring.rat(ring.variable("t"))
    with pytest.raises(PIndependenceFailure) as info:
        validate_tower(ring, None, None, {}, [("a1", 1, t * t)])
    assert info.value.index == 1
    with pytest.raises(PIndependenceFailure) as info:
        validate_tower(ring, None, None, {},
                       [("a1", 1, s), ("a2", 1, s * t * t)])
    assert info.value.index == 2
    # p-independent pair with higher exponents is fine
    spec = validate_tower(ring, None, None, {},
                          [("a1", 2, s), ("a2", 1, s * t)])
    assert spec.degree == 8


def test_spec_mismatch():
    t1, t3 = make_t1(), make_t3()
    with pytest.raises(SpecMismatch):
        t1.generator("a1") + t3.generator("b")


def test_element_str_canonical():
    t1 = make_t1()
    a1 = t1.generator("a1")
    ring = t1.ring
    t = ring.rat(ring.variable("t"))
    assert str(a1 + t1.scalar(t)) == "a1 + t"
    assert str(a1 * (t + 1)) == "(t + 1)*a1"
    assert str(elt_inverse(a1)) == "(1/t)*a1"
    assert str(t1.zero()) == "0"
    t3 = make_t3()
    x = t3.generator("i") * t3.generator("b") ** 2 * 2 + t3.one()
    assert str(x) == "2*i*b^2 + 1"
