"""Galois-Hopf algebra: structure constants, Hopf axioms, actions, K-forms."""

import math
import random

import pytest

from conftest import make_t1, make_t2, make_t3
from descent_kit import hg, hopf, linalg
from descent_kit import truncated as tr
from descent_kit.errors import (ContextMismatch, InputError,
                                SemilinearityFailure, SpecMismatch)
from descent_kit.fields import PolyRing
from descent_kit.hopf import (GhaContext, act_on_L, extract_from_hg,
                              format_gha_index, gha_antipode, gha_comul,
                              gha_counit, gha_invariants, gha_mul, lucas_binom,
                              natural_action, verify_semilinear)
from descent_kit.tower import elt_inverse, random_element, validate_tower
from descent_kit.truncated import TruncElement, from_tower, xbar


def make_galois_only():
    # e = 0: L = F3(t)(i), i^2 = -1, group {id, c}
    ring = PolyRing(3, ("t",))
    one = ring.rat_one
    zero = ring.rat_zero
    return validate_tower(ring, "i", [one, zero, one],
                          {"c": [zero, ring.rat(2)]}, [])


def all_contexts():
    return [GhaContext(make_t1()), GhaContext(make_t2()),
            GhaContext(make_t3()), GhaContext(make_galois_only())]


def identity_rho(spec, dim):
    cols = [[tr.one(spec) if r == c else tr.zero(spec) for r in range(dim)]
            for c in range(dim)]
    return {name: cols for name, _ in hg.canonical_generators(spec)}


# ------------------------------------------------------------------ binomials

def test_lucas_binom_matches_factorials():
    for p in (2, 3, 5):
        for a in range(40):
            for b in range(40):
                want = math.comb(a, b) % p if b <= a else 0
                assert lucas_binom(a, b, p) == want


def test_basis_size_is_tower_degree():
    for ctx in all_contexts():
        assert ctx.dim == ctx.spec.degree
        assert len(ctx.basis) == len(set(ctx.basis))


# ------------------------------------------------------------------ gha_mul

def test_mul_divided_power_square_char2():
    # binom(2,1) = 2 = 0 mod 2
    ctx = GhaContext(make_t1())
    d1 = ctx.basis_element("id", (1,))
    assert gha_mul(d1, d1) == ctx.zero()


def test_mul_lucas_example():
    # p=2, n=2 factor: D^(1) . D^(2) = binom(3,1) D^(3) = D^(3)
    ctx = GhaContext(make_t2())
    d1 = ctx.basis_element("id", (0, 1))
    d2 = ctx.basis_element("id", (0, 2))
    assert gha_mul(d1, d2) == ctx.basis_element("id", (0, 3))


def test_mul_overflow_vanishes():
    ctx = GhaContext(make_t2())
    d2 = ctx.basis_element("id", (0, 2))
    d3 = ctx.basis_element("id", (0, 3))
    assert gha_mul(d2, d3) == ctx.zero()
    assert gha_mul(d3, d3) == ctx.zero()


def test_mul_group_law():
    ctx = GhaContext(make_t3())
    dc = ctx.basis_element("c", (0,))
    assert gha_mul(dc, dc) == ctx.unit()
    # D_c commutes with the divided powers
    d1 = ctx.basis_element("id", (1,))
    assert gha_mul(dc, d1) == gha_mul(d1, dc) == ctx.basis_element("c", (1,))


def test_mul_associative_on_basis():
    for ctx in all_contexts():
        elts = [ctx.basis_element(g, k) for g, k in ctx.basis]
        for x in elts:
            for y in elts:
                xy = gha_mul(x, y)
                for z in elts:
                    assert gha_mul(xy, z) == gha_mul(x, gha_mul(y, z))


def test_mul_unit_neutral():
    for ctx in all_contexts():
        e = ctx.unit()
        for g, k in ctx.basis:
            d = ctx.basis_element(g, k)
            assert gha_mul(e, d) == d
            assert gha_mul(d, e) == d


def test_mul_bilinear():
    ctx = GhaContext(make_t3())
    ring = ctx.spec.ring
    t = ring.rat(ring.variable("t"))
    x = ctx.basis_element("id", (1,)).scale(t) + ctx.basis_element("c", (0,))
    y = ctx.basis_element("id", (2,)).scale(2)
    lhs = gha_mul(x, y)
    want = (gha_mul(ctx.basis_element("id", (1,)), y).scale(t)
            + gha_mul(ctx.basis_element("c", (0,)), y))
    assert lhs == want


def test_mul_context_mismatch():
    a = GhaContext(make_t1()).unit()
    b = GhaContext(make_t2()).unit()
    with pytest.raises(ContextMismatch):
        gha_mul(a, b)


# ------------------------------------------------------- comul, counit, antipode

def test_comul_divided_power():
    ctx = GhaContext(make_t1())
    one = ctx.spec.ring.rat_one
    got = gha_comul(ctx.basis_element("id", (1,)))
    assert got == {
        (("id", (0,)), ("id", (1,))): one,
        (("id", (1,)), ("id", (0,))): one,
    }


def test_comul_grouplike():
    ctx = GhaContext(make_t3())
    one = ctx.spec.ring.rat_one
    assert gha_comul(ctx.basis_element("c", (0,))) == {
        (("c", (0,)), ("c", (0,))): one}
    assert gha_comul(ctx.unit()) == {(("id", (0,)), ("id", (0,))): one}


def test_counit_values():
    ctx = GhaContext(make_t3())
    ring = ctx.spec.ring
    assert gha_counit(ctx.basis_element("id", (1,))) == ring.rat_zero
    assert gha_counit(ctx.unit()) == ring.rat_one
    assert gha_counit(ctx.basis_element("c", (0,))) == ring.rat_one
    mixed = ctx.basis_element("c", (0,)) + ctx.basis_element("c", (2,))
    assert gha_counit(mixed) == ring.rat_one


def test_antipode_frozen():
    ctx = GhaContext(make_t1())
    d1 = ctx.basis_element("id", (1,))
    assert gha_antipode(d1) == d1  # (-1) = 1 in characteristic 2
    assert gha_antipode(ctx.unit()) == ctx.unit()
    ctx3 = GhaContext(make_t3())
    dc = ctx3.basis_element("c", (0,))
    assert gha_antipode(dc) == dc  # c is an involution
    d = ctx3.basis_element("id", (1,))
    assert gha_antipode(d) == d.scale(2)  # (-1)^1 = 2 mod 3


def test_coassociativity_on_basis():
    for ctx in all_contexts():
        for index in ctx.basis:
            left = set()
            for a, b in ctx.comul_pairs(index):
                for a1, a2 in ctx.comul_pairs(a):
                    left.add((a1, a2, b))
            right = set()
            for a, b in ctx.comul_pairs(index):
                for b1, b2 in ctx.comul_pairs(b):
                    right.add((a, b1, b2))
            assert left == right


def test_counit_axiom_on_basis():
    for ctx in all_contexts():
        for index in ctx.basis:
            d = ctx.basis_element(*index)
            lhs = ctx.zero()
            for (a, b), c in gha_comul(d).items():
                if ctx.counit_index(a):
                    lhs = lhs + ctx.basis_element(*b).scale(c)
            assert lhs == d
            rhs = ctx.zero()
            for (a, b), c in gha_comul(d).items():
                if ctx.counit_index(b):
                    rhs = rhs + ctx.basis_element(*a).scale(c)
            assert rhs == d


def test_antipode_axiom_both_sides():
    # m(S x id)Delta = unit.counit = m(id x S)Delta, on every basis element
    for ctx in all_contexts():
        for index in ctx.basis:
            d = ctx.basis_element(*index)
            left = ctx.zero()
            right = ctx.zero()
            for (a, b), c in gha_comul(d).items():
                left = left + gha_mul(gha_antipode(ctx.basis_element(*a)),
                                      ctx.basis_element(*b)).scale(c)
                right = right + gha_mul(ctx.basis_element(*a),
                                        gha_antipode(ctx.basis_element(*b))).scale(c)
            want = ctx.unit().scale(gha_counit(d))
            assert left == want
            assert right == want


def test_antipode_is_antihomomorphism():
    ctx = GhaContext(make_t3())
    for ix in ctx.basis:
        for iy in ctx.basis:
            x = ctx.basis_element(*ix)
            y = ctx.basis_element(*iy)
            assert gha_antipode(gha_mul(x, y)) == gha_mul(
                gha_antipode(y), gha_antipode(x))


# ------------------------------------------------------------------ act_on_L

def test_act_frozen_examples():
    ctx = GhaContext(make_t2())
    spec = ctx.spec
    a2_cubed = spec.monomial((0, 0, 3))
    # binom(3,1) = 1 mod 2
    assert act_on_L(ctx, ("id", (0, 1)), a2_cubed) == spec.monomial((0, 0, 2))
    assert act_on_L(ctx, ("id", (0, 1)), spec.one()).is_zero()
    # binom(1,2) = 0
    assert act_on_L(ctx, ("id", (0, 2)), spec.monomial((0, 0, 1))).is_zero()


def test_act_galois_part():
    ctx = GhaContext(make_t3())
    spec = ctx.spec
    i = spec.generator("i")
    b = spec.generator("b")
    assert act_on_L(ctx, ("c", (0,)), i) == i * 2
    assert act_on_L(ctx, ("c", (0,)), b) == b
    assert act_on_L(ctx, ("c", (1,)), i * b) == (i * 2)  # D^(1)(b) = 1


def test_act_operator_representation_faithful():
    # act(D^(h)) . act(D^(k)) = binom(h+k,h) act(D^(h+k)), zero past the range
    ctx = GhaContext(make_t2())
    spec = ctx.spec
    rng = random.Random(71)
    xs = [random_element(spec, rng, maxdeg=1) for _ in range(4)]
    for h in range(4):
        for k in range(4):
            dh = ("id", (0, h))
            dk = ("id", (0, k))
            c = lucas_binom(h + k, h, 2) if h + k < 4 else 0
            for x in xs:
                got = act_on_L(ctx, dh, act_on_L(ctx, dk, x))
                if c == 0:
                    assert got.is_zero()
                else:
                    assert got == act_on_L(ctx, ("id", (0, h + k)), x) * c


def test_act_leibniz_through_comul():
    # D(x.y) = sum D'(x) D''(y) over the comultiplication
    ctx = GhaContext(make_t3())
    spec = ctx.spec
    rng = random.Random(72)
    for index in [("id", (1,)), ("id", (2,)), ("c", (2,))]:
        for _ in range(4):
            x = random_element(spec, rng, maxdeg=1)
            y = random_element(spec, rng, maxdeg=1)
            want = spec.zero()
            for left, right in ctx.comul_pairs(index):
                want = want + (act_on_L(ctx, left, x)
                               * act_on_L(ctx, right, y))
            assert act_on_L(ctx, index, x * y) == want


def test_act_spec_mismatch():
    ctx = GhaContext(make_t1())
    other = make_t2()
    with pytest.raises(SpecMismatch):
        act_on_L(ctx, ("id", (1,)), other.one())


# ------------------------------------------------------------- natural action

def test_natural_frozen_t1():
    ctx = GhaContext(make_t1())
    spec = ctx.spec
    act = natural_action(ctx, 2)
    a1 = spec.generator("a1")
    got = act.apply(("id", (1,)), [a1, spec.one()])
    assert got == [spec.one(), spec.zero()]


def test_natural_frozen_t3():
    ctx = GhaContext(make_t3())
    spec = ctx.spec
    act = natural_action(ctx, 2)
    i = spec.generator("i")
    b = spec.generator("b")
    assert act.apply(("c", (0,)), [i, b]) == [i * 2, b]


def test_natural_counit_rule_on_rational_vectors():
    ctx = GhaContext(make_t2())
    spec = ctx.spec
    ring = spec.ring
    act = natural_action(ctx, 2)
    v = [spec.one(), spec.scalar(ring.rat(ring.variable("t")))]
    for index in ctx.basis:
        got = act.apply(index, v)
        if ctx.counit_index(index):
            assert got == v
        else:
            assert all(x.is_zero() for x in got)


def test_natural_passes_verification():
    for ctx in all_contexts():
        act = natural_action(ctx, 2)
        assert verify_semilinear(act) == []


def test_pure_group_action_passes():
    # e = 0: the classical Galois case, only the group law to check
    ctx = GhaContext(make_galois_only())
    act = natural_action(ctx, 3)
    assert verify_semilinear(act) == []


# ------------------------------------------------------------- gha_invariants

def test_invariants_of_natural_action():
    for ctx in [GhaContext(make_t1()), GhaContext(make_t3())]:
        for dim in (1, 2):
            act = natural_action(ctx, dim)
            vecs = gha_invariants(act)
            assert len(vecs) == dim
            for v in vecs:
                assert all(x.as_scalar() is not None for x in v)
            # K-linear independence of the scalar matrix
            ring = ctx.spec.ring
            rows = [[x.as_scalar() for x in v] for v in vecs]
            assert linalg.kernel_basis(ring, rows, dim) == []


def test_invariants_zero_dimensional():
    ctx = GhaContext(make_t1())
    assert gha_invariants(natural_action(ctx, 0)) == []


def test_invariants_twisted_line_t1():
    # rho(phi_1) = multiplication by (a1 + X)/a1; the K-form is spanned by a1
    spec = make_t1()
    ctx = GhaContext(spec)
    a1 = spec.generator("a1")
    twist = from_tower(spec.one()) + xbar(spec) * elt_inverse(a1)
    act = extract_from_hg(ctx, {"phi_1": [[twist]]}, 1)
    vecs = gha_invariants(act)
    assert len(vecs) == 1
    assert set(vecs[0][0].coords) == {(0, 1)}  # a scalar multiple of a1


def test_invariants_twisted_line_t2():
    spec = make_t2()
    ctx = GhaContext(spec)
    a1 = spec.generator("a1")
    twist = from_tower(spec.one()) + xbar(spec, 2) * elt_inverse(a1)
    rho = {"phi_1": [[twist]], "phi_2": [[tr.one(spec)]]}
    act = extract_from_hg(ctx, rho, 1)
    # the X^2 coefficient block of rho(phi_1) is 1/a1
    assert act.matrix(("id", (1, 0)))[0][0] == elt_inverse(a1)
    vecs = gha_invariants(act)
    assert len(vecs) == 1
    assert set(vecs[0][0].coords) == {(0, 1, 0)}


# ------------------------------------------------------------ extract_from_hg

def test_extract_identity_rho_gives_natural():
    for spec in [make_t1(), make_t3()]:
        ctx = GhaContext(spec)
        act = extract_from_hg(ctx, identity_rho(spec, 2), 2)
        assert act == natural_action(ctx, 2)
        one_k = tuple(1 if i == 0 else 0 for i in range(len(spec.insep)))
        mat = act.matrix(("id", one_k))
        assert all(x.is_zero() for col in mat for x in col)


def test_extract_missing_generator():
    spec = make_t2()
    ctx = GhaContext(spec)
    with pytest.raises(InputError):
        extract_from_hg(ctx, {"phi_1": [[tr.one(spec)]]}, 1)


def test_extract_rejects_scaled_derivation():
    # multiplication by 1 + 2/b X is not an automorphism image: the
    # composition law D^(1)D^(1) = 2 D^(2) fails for the extracted blocks
    spec = make_t3()
    ctx = GhaContext(spec)
    b = spec.generator("b")
    bad = from_tower(spec.one()) + xbar(spec) * (elt_inverse(b) * 2)
    rho = identity_rho(spec, 1)
    rho["phi_1"] = [[bad]]
    with pytest.raises(SemilinearityFailure):
        extract_from_hg(ctx, rho, 1)


def test_extract_honest_twist_t3_passes():
    spec = make_t3()
    ctx = GhaContext(spec)
    b = spec.generator("b")
    twist = from_tower(spec.one()) + xbar(spec) * elt_inverse(b)
    rho = identity_rho(spec, 1)
    rho["phi_1"] = [[twist]]
    act = extract_from_hg(ctx, rho, 1)
    assert act.matrix(("id", (1,)))[0][0] == elt_inverse(b)


def test_verify_reports_scaled_matrix():
    spec = make_t3()
    ctx = GhaContext(spec)
    b = spec.generator("b")
    twist = from_tower(spec.one()) + xbar(spec) * elt_inverse(b)
    rho = identity_rho(spec, 1)
    rho["phi_1"] = [[twist]]
    act = extract_from_hg(ctx, rho, 1)
    mats = dict(act.mats)
    mats[("id", (1,))] = [[x * 2 for x in col]
                          for col in mats[("id", (1,))]]
    bad = hopf.SemilinearGhaAction(ctx, 1, mats)
    report = verify_semilinear(bad)
    assert report != []
    assert any("composition" in line for line in report)


# ----------------------------------------------------------------- formatting

def test_format_gha_index():
    assert format_gha_index(("id", (0, 0))) == "1"
    assert format_gha_index(("c", (2,))) == "D_c*D_1^(2)"
    assert format_gha_index(("id", (1, 3))) == "D_1^(1)*D_2^(3)"
    ctx = GhaContext(make_t3())
    e = ctx.basis_element("c", (1,)) + ctx.unit().scale(2)
    assert str(e) == "2*1 + D_c*D_1^(1)"
