"""Acceptance gate: the twelve release criteria, one test per criterion.

Reference towers (shared with the rest of the suite via conftest):

  T1: p=2, K=F2(t),   a1^2 = t                 (exponent 1)
  T2: p=2, K=F2(s,t), a1^2 = s, a2^4 = t       (exponent 2)
  T3: p=3, K=F3(t),   sep i, i^2 = -1, conj c; b^3 = t

Every check is exact symbolic arithmetic over F_p(t_1..t_r); agreement
means equality, never closeness.  Each test ends by asserting the
wall-clock budget of its criterion.  K-forms produced along the way are
re-verified by an auditor that is independent of the engine's own echelon
(flat rank computations over K); criterion 5 is the aggregation line for
that audit ledger.
"""

import contextlib
import io
import math
import os
import random
import time

import test_cli
from conftest import make_t1, make_t2, make_t3

from descent_kit import cli, descent, hg, linalg
from descent_kit.descent import (SigmaLinearAction, SubspaceL, check_ideal,
                                 check_morphism, check_subspace,
                                 deformation_descent, hg_subgroup,
                                 is_xbar_saturated, kform_from_action,
                                 oracle_subspace, random_stable_module,
                                 random_subspace, validate_action,
                                 verify_descent_datum)
from descent_kit.fields import PolyRing
from descent_kit.groebner import (PresentedAlgebraL, groebner_basis,
                                  ideal_equal, poly_from_terms, reduce_poly)
from descent_kit.hopf import (GhaContext, extract_from_hg, gha_antipode,
                              gha_comul, gha_counit, gha_mul, lucas_binom,
                              natural_action)
from descent_kit.tower import (IDENTITY_AUTO, elt_inverse, random_element,
                               validate_tower)
from descent_kit.truncated import from_tower, xbar


def _finish(t0, limit):
    elapsed = time.monotonic() - t0
    assert elapsed < limit, "budget exceeded: %.2fs >= %.0fs" % (elapsed, limit)


def _base_scalar(spec):
    return spec.scalar(spec.ring.rat(spec.ring.variable(0)))


def _identity_assignment(spec, dim):
    one = from_tower(spec.one())
    zero = from_tower(spec.zero())
    mat = [[one if r == c else zero for r in range(dim)] for c in range(dim)]
    return {name: [list(col) for col in mat]
            for name, _ in hg.canonical_generators(spec)}


def _l_mix(spec, rng, basis):
    """Unimodular L-mix: same span, but the presented basis is irrational."""
    out = []
    for i, v in enumerate(basis):
        c = random_element(spec, rng, maxdeg=1)
        while c.is_zero():
            c = random_element(spec, rng, maxdeg=1)
        vec = [c * x for x in v]
        if i:
            d = random_element(spec, rng, maxdeg=1)
            vec = [a + d * b for a, b in zip(vec, out[i - 1])]
        out.append(vec)
    return out


# --------------------------------------------------------- K-form audit ledger

KFORM_AUDITS = [0]


def _audit_vector_k_form(spec, W, k_form):
    """Independent re-check of a subspace K-form.

    Verifies, without using the engine's echelon: every entry lies in K;
    every canonical generator fixes every vector; the vectors are
    K-linearly independent; and they span W over L.  The span check is a
    flat rank computation over K: the K-rank of all tower-monomial
    multiples of W's basis must not grow when the K-form is appended, and
    K-independent K-rational vectors are automatically L-independent, so
    a dimension count finishes the argument.
    """
    ring = spec.ring
    N = spec.degree
    assert len(k_form) == len(W.basis)
    for vec in k_form:
        assert len(vec) == W.ambient
        for x in vec:
            assert x.in_base_field()
        lift = [from_tower(x) for x in vec]
        for name, phi in hg.canonical_generators(spec):
            assert [phi.apply(y) for y in lift] == lift, name
    k = len(k_form)
    if k:
        flat = [descent._flatten_tower_vector(vec) for vec in k_form]
        assert linalg.rank(ring, flat, W.ambient * N) == k
        rows = []
        for vec in list(W.basis) + list(k_form):
            for u in spec.basis:
                m = spec.monomial(u)
                rows.append(descent._flatten_tower_vector(
                    [x * m for x in vec]))
        assert linalg.rank(ring, rows, W.ambient * N) == N * k
    KFORM_AUDITS[0] += 1


# ------------------------------------------------------------------- criteria

def test_01_fixed_subfield_of_canonical_generators_is_k():
    t0 = time.monotonic()
    for make in (make_t1, make_t2, make_t3):
        spec = make()
        gens = [phi for _, phi in hg.canonical_generators(spec)]
        basis = hg.fixed_subfield(spec, gens)
        assert len(basis) == 1
        assert basis[0].in_base_field() and not basis[0].is_zero()
    _finish(t0, 5.0)


def test_02_delta_is_a_group_isomorphism_on_random_derivations():
    t0 = time.monotonic()
    for spec, base in ((make_t1(), 100), (make_t2(), 200), (make_t3(), 300)):
        derivations = []
        for seed in range(base, base + 50):
            u = hg.random_hg_element(spec, seed, in_a0=True)
            d = hg.delta_inverse(u)
            hg.verify_leibniz(d)
            assert hg.delta(d) == u
            assert hg.delta_inverse(hg.delta(d)) == d
            derivations.append(d)
        for i, d in enumerate(derivations):
            d2 = derivations[(i + 7) % len(derivations)]
            assert (hg.delta(hg.hd_product(d, d2))
                    == hg.hg_compose(hg.delta(d), hg.delta(d2)))
    _finish(t0, 30.0)


def _hopf_contexts():
    ring2 = PolyRing(2, ("t",))
    t2 = ring2.rat(ring2.variable("t"))
    deep = validate_tower(ring2, None, None, {}, [("a1", 3, t2)])  # q = 8
    ring5 = PolyRing(5, ("t",))
    t5 = ring5.rat(ring5.variable("t"))
    wide = validate_tower(ring5, None, None, {}, [("a1", 1, t5)])  # q = 5
    return [GhaContext(s) for s in
            (make_t1(), make_t2(), make_t3(), deep, wide)]


def test_03_hopf_axioms_and_binomial_structure_constants():
    t0 = time.monotonic()
    for ctx in _hopf_contexts():
        elts = [ctx.basis_element(*ix) for ix in ctx.basis]
        # coassociativity, on indices (all comultiplication coefficients are 1)
        for index in ctx.basis:
            left = set()
            right = set()
            for a, b in ctx.comul_pairs(index):
                for a1, a2 in ctx.comul_pairs(a):
                    left.add((a1, a2, b))
                for b1, b2 in ctx.comul_pairs(b):
                    right.add((a, b1, b2))
            assert left == right
        # counit axiom and antipode axiom, both sides, every basis element
        for d in elts:
            lhs = ctx.zero()
            rhs = ctx.zero()
            s_left = ctx.zero()
            s_right = ctx.zero()
            for (a, b), c in gha_comul(d).items():
                if ctx.counit_index(a):
                    lhs = lhs + ctx.basis_element(*b).scale(c)
                if ctx.counit_index(b):
                    rhs = rhs + ctx.basis_element(*a).scale(c)
                s_left = s_left + gha_mul(
                    gha_antipode(ctx.basis_element(*a)),
                    ctx.basis_element(*b)).scale(c)
                s_right = s_right + gha_mul(
                    ctx.basis_element(*a),
                    gha_antipode(ctx.basis_element(*b))).scale(c)
            assert lhs == d and rhs == d
            want = ctx.unit().scale(gha_counit(d))
            assert s_left == want and s_right == want
        # associativity on all basis triples
        for x in elts:
            for y in elts:
                xy = gha_mul(x, y)
                for z in elts:
                    assert gha_mul(xy, z) == gha_mul(x, gha_mul(y, z))
        # binomial structure constants against the factorial oracle
        zero_k = tuple(0 for _ in ctx.spec.insep)
        for i, q in enumerate(ctx.spec.insep_orders):
            for a in range(q):
                for b in range(q):
                    ka = list(zero_k)
                    ka[i] = a
                    kb = list(zero_k)
                    kb[i] = b
                    hit = ctx.mul_index((IDENTITY_AUTO, tuple(ka)),
                                        (IDENTITY_AUTO, tuple(kb)))
                    if a + b >= q:
                        assert hit is None
                        continue
                    want = math.comb(a + b, a) % ctx.p
                    assert lucas_binom(a + b, a, ctx.p) == want
                    if want == 0:
                        assert hit is None
                    else:
                        kc = list(zero_k)
                        kc[i] = a + b
                        assert hit == (want, (IDENTITY_AUTO, tuple(kc)))
    _finish(t0, 10.0)


def test_04_subspace_criterion_matches_oracle_on_600_instances():
    t0 = time.monotonic()
    verdicts = set()
    for spec, seed in ((make_t1(), 1041), (make_t2(), 1042),
                       (make_t3(), 1043)):
        rng = random.Random(seed)
        for trial in range(200):
            ambient = rng.randrange(2, 4)
            dim = rng.randrange(1, ambient + 1)
            if trial % 2 == 0:
                W0 = random_subspace(spec, rng, ambient, dim, rational=True)
                W = SubspaceL(spec, ambient, _l_mix(spec, rng, W0.basis))
            else:
                W = random_subspace(spec, rng, ambient, dim)
            rep = check_subspace(ambient, W)
            assert rep.defined == oracle_subspace(ambient, W)
            verdicts.add(rep.verdict)
            if rep.defined:
                # the engine asserts internal agreement of the Hopf and the
                # truncated criteria and records it; make that observable
                assert "both stability criteria pass" in rep.diagnostics
                _audit_vector_k_form(spec, W, rep.k_form)
            else:
                assert any(d.startswith("truncated criterion agrees")
                           for d in rep.diagnostics)
                assert rep.witness["element"] in W.basis
    assert verdicts == {"defined_over_K", "not_defined_over_K"}
    _finish(t0, 120.0)


def test_05_every_k_form_in_the_suite_is_sound():
    # Criteria 4 and 8 audit each K-form inline the moment it is produced;
    # this test contributes a dedicated batch across all towers and entry
    # points and asserts the ledger recorded real work with zero failures
    # (an audit failure aborts its own criterion immediately).
    before = KFORM_AUDITS[0]
    for spec, seed in ((make_t1(), 5051), (make_t2(), 5052),
                       (make_t3(), 5053)):
        rng = random.Random(seed)
        for trial in range(10):
            ambient = rng.randrange(1, 4)
            dim = rng.randrange(0, ambient + 1)
            W0 = random_subspace(spec, rng, ambient, dim, rational=True)
            W = SubspaceL(spec, ambient, _l_mix(spec, rng, W0.basis))
            rep = check_subspace(ambient, W)
            assert rep.defined
            _audit_vector_k_form(spec, W, rep.k_form)
        rho = SigmaLinearAction(spec, 2, _identity_assignment(spec, 2))
        rep = kform_from_action(rho)
        assert rep.defined
        full = SubspaceL(spec, 2, [[spec.one(), spec.zero()],
                                   [spec.zero(), spec.one()]])
        _audit_vector_k_form(spec, full, rep.k_form)
        mat = [[spec.scalar(descent._random_scalar(spec.ring, rng))
                for _ in range(2)] for _ in range(2)]
        mrep = check_morphism(spec, mat)
        assert mrep.defined and mrep.k_form == mat
        assert all(x.in_base_field() for col in mrep.k_form for x in col)
    assert KFORM_AUDITS[0] - before == 33


def test_06_twisted_unit_worked_example():
    t0 = time.monotonic()
    spec = make_t1()
    a1 = spec.generator("a1")
    u = from_tower(spec.one()) + xbar(spec) * elt_inverse(a1)
    rho = SigmaLinearAction(spec, 1, {"phi_1": [[u]]})
    assert validate_action(rho) == []
    phi = dict(hg.canonical_generators(spec))["phi_1"]
    assert u * phi.apply(u) == from_tower(spec.one())  # twisted square is 1
    rep = kform_from_action(rho)
    assert rep.defined
    assert rep.k_form == [[a1]]
    # the K-form vector really is invariant under the twisted action
    assert u * phi.apply(from_tower(a1)) == from_tower(a1)
    _finish(t0, 1.0)


def test_07_extraction_reproduces_the_natural_action():
    t0 = time.monotonic()
    for make in (make_t1, make_t2, make_t3):
        spec = make()
        ctx = GhaContext(spec)
        one = from_tower(spec.one())
        zero = from_tower(spec.zero())
        for dim in (1, 2, 3, 4):
            mat = [[one if r == c else zero for r in range(dim)]
                   for c in range(dim)]
            rho = {name: [list(col) for col in mat]
                   for name, _ in hg.canonical_generators(spec)}
            assert extract_from_hg(ctx, rho, dim) == natural_action(ctx, dim)
    _finish(t0, 10.0)


def test_08_stable_modules_are_saturated_and_match_the_fiber_oracle():
    t0 = time.monotonic()
    for spec, seed in ((make_t1(), 2081), (make_t3(), 2083)):
        rng = random.Random(seed)
        for trial in range(60):
            ambient = rng.randrange(2, 4)
            rank = rng.randrange(1, ambient + 1)
            Wt = random_stable_module(spec, rng, ambient, rank)
            ok, witness = is_xbar_saturated(Wt)
            assert ok and witness is None
            rep = deformation_descent(ambient, Wt)
            fiber = SubspaceL(spec, ambient, Wt.fiber())
            assert rep.defined == oracle_subspace(ambient, fiber)
            if rep.defined:
                _audit_vector_k_form(spec, fiber, rep.k_form)
    _finish(t0, 60.0)


def test_09_morphism_descent_and_perturbation_witnesses():
    t0 = time.monotonic()
    rational_total = 0
    perturbed_total = 0
    for spec, seed in ((make_t1(), 3091), (make_t2(), 3092),
                       (make_t3(), 3093)):
        rng = random.Random(seed)
        for trial in range(34):
            n = rng.randrange(1, 4)
            mat = [[spec.scalar(descent._random_scalar(spec.ring, rng))
                    for _ in range(n)] for _ in range(n)]
            rep = check_morphism(spec, mat)
            oracle = all(x.in_base_field() for col in mat for x in col)
            assert oracle and rep.defined == oracle
            assert rep.k_form == mat
            rational_total += 1
            alpha = spec.generator(spec.insep[trial % len(spec.insep)][0])
            r, c = rng.randrange(n), rng.randrange(n)
            while mat[c][r].is_zero():
                mat[c][r] = spec.scalar(
                    descent._random_scalar(spec.ring, rng))
            mat[c][r] = mat[c][r] * alpha
            rep2 = check_morphism(spec, mat)
            oracle = all(x.in_base_field() for col in mat for x in col)
            assert not oracle and rep2.defined == oracle
            assert rep2.witness["element"] == mat[c][r]
            assert not rep2.witness["element"].in_base_field()
            assert rep2.witness["image"] != from_tower(mat[c][r])
            perturbed_total += 1
    assert rational_total >= 100 and perturbed_total >= 100
    _finish(t0, 30.0)


def test_10_ideal_descent_reject_and_accept_with_groebner_proof():
    t0 = time.monotonic()
    spec = make_t1()
    a1 = spec.generator("a1")
    t = _base_scalar(spec)
    names = ("x", "y")
    x = poly_from_terms(spec, names, [((1, 0), spec.one())])
    y = poly_from_terms(spec, names, [((0, 1), spec.one())])
    rejected = check_ideal(PresentedAlgebraL(spec, names, [x + y * a1]))
    assert not rejected.defined
    assert rejected.witness["image"] == y
    gens = [x * x + y * y * t]
    accepted = check_ideal(PresentedAlgebraL(spec, names, gens))
    assert accepted.defined and accepted.k_form
    for g in accepted.k_form:
        assert all(c.in_base_field() for c in g.coefficients())
    gb_orig = groebner_basis(gens)
    gb_kform = groebner_basis(accepted.k_form)
    assert all(reduce_poly(g, gb_orig).is_zero() for g in accepted.k_form)
    assert all(reduce_poly(f, gb_kform).is_zero() for f in gens)
    assert ideal_equal(accepted.k_form, gens)
    _finish(t0, 5.0)


def test_11_cocycle_verification_on_the_finite_subgroup():
    t0 = time.monotonic()
    for make, order in ((make_t1, 2), (make_t2, 4), (make_t3, 6)):
        spec = make()
        table = hg_subgroup(spec)
        assert len(table) == order
        elts = [e for _, e in table]
        assert any(e.is_identity() for e in elts)
        for a in elts:  # the enumeration is a group: closure and inverses
            assert any(e == hg.hg_inverse(a) for e in elts)
            for b in elts:
                prod = hg.hg_compose(a, b)
                assert sum(1 for e in elts if e == prod) == 1
    spec = make_t1()
    u = from_tower(spec.one()) + xbar(spec) * elt_inverse(spec.generator("a1"))
    assert verify_descent_datum(spec, {"phi_1": [[u]]}, 1) == []
    spec3 = make_t3()
    good = _identity_assignment(spec3, 1)
    good["phi_c"] = [[from_tower(spec3.generator("i"))]]
    assert verify_descent_datum(spec3, good, 1) == []
    spec2 = make_t2()
    bad = _identity_assignment(spec2, 1)
    bad["phi_1"] = [[from_tower(spec2.one()) + xbar(spec2)]]
    violations = verify_descent_datum(spec2, bad, 1)
    assert any("cocycle fails at (" in v for v in violations)
    _finish(t0, 5.0)


def test_12_cli_golden_corpus_is_byte_identical_across_runs():
    t0 = time.monotonic()
    cases = test_cli.GOLDEN_CASES
    assert len({doc for _, doc, _, _, _ in cases}) >= 10
    for name, doc, command, flags, want_code in cases:
        path = os.path.join(test_cli.GOLDEN_DIR, doc)
        outs = []
        for _ in range(2):
            buf_out = io.StringIO()
            buf_err = io.StringIO()
            with contextlib.redirect_stdout(buf_out), \
                    contextlib.redirect_stderr(buf_err):
                code = cli.run([command, "--input", path, *flags])
            assert code == want_code, name
            assert buf_err.getvalue() == ""
            outs.append(buf_out.getvalue())
        assert outs[0] == outs[1], "two runs of %s differ" % name
        golden = os.path.join(test_cli.GOLDEN_DIR, name + ".out")
        with open(golden, "r", encoding="utf-8") as fh:
            assert outs[0] == fh.read(), name
    _finish(t0, 5.0)
