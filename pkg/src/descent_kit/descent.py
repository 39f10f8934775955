"""Descent decision procedures for subspaces, actions, ideals, and morphisms.

Every procedure quantifies over the canonical generator family only (the
Galois lifts phi_g and the shifts phi_i, or on the Hopf side the generating
set {D_g} and {D_i^(k)}); final K-forms are re-verified independently, so a
positive verdict never rests on the generator reduction alone.  Negative
verdicts always carry a concrete witness element that the caller can recheck
by one membership test.

Subspace descent runs the two criteria of the governing equivalence theorem
side by side: stability under the Galois-Hopf generators acting on V tensor L
coordinate-wise, and stability of the L[Xb]-extension under the truncated
automorphism group.  The two verdicts must agree; a disagreement raises
InternalInconsistency, since it can only come from an implementation bug.
K-forms are computed by restricting the Hopf action to the subspace and
taking Hopf invariants.

The brute-force oracle (oracle_subspace) answers the same question by flat
K-linear algebra: W is defined over K exactly when its intersection with the
K-rational slice has K-dimension equal to dim_L W.
"""

from .errors import (ActionValidationFailure, ExponentTooLarge, InputError,
                     InternalInconsistency, NotAForm, NotFree, SpecMismatch)
from . import groebner, hg, linalg
from .hopf import GhaContext, SemilinearGhaAction, extract_from_hg, \
    format_gha_index, gha_invariants, _generator_indices
from .groebner import PolyL, PresentedAlgebraL, groebner_basis, ideal_equal, \
    ideal_member
from .tower import TowerElement, TowerSpec, elt_inverse, random_element
from .truncated import TruncElement, from_tower, trunc_invert


# ----------------------------------------------------------------- L-echelon

class _LEchelon:
    """Fraction-free Gaussian elimination over the field L.

    Rows are eliminated by cross-multiplication (no tower inversions, which
    are expensive on dense elements of large towers) and rescaled by a
    K-scalar to stay primitive.  Membership needs no inversion at all;
    pivot-normalized rows are computed once, on demand, for the callers that
    need actual coordinates.
    """

    def __init__(self, spec: TowerSpec, rows):
        self.spec = spec
        self.rows = []
        self.pivots = []
        self.width = len(rows[0]) if rows else 0
        self._normalized = None
        for row in rows:
            self._insert(list(row))

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _flat_normalize(self, vec) -> list:
        flat = linalg.normalize_vector(self.spec.ring,
                                       _flatten_tower_vector(vec))
        N = self.spec.degree
        return [self.spec.from_coords(flat[j * N:(j + 1) * N])
                for j in range(len(vec))]

    def _insert(self, vec) -> bool:
        vec = self.reduce(vec)
        lead = next((j for j, x in enumerate(vec) if not x.is_zero()), None)
        if lead is None:
            return False
        vec = self._flat_normalize(vec)
        for i in range(len(self.rows)):
            f = self.rows[i][lead]
            if not f.is_zero():
                piv = vec[lead]
                self.rows[i] = self._flat_normalize(
                    [piv * a - f * b for a, b in zip(self.rows[i], vec)])
        self.rows.append(vec)
        self.pivots.append(lead)
        self._normalized = None
        return True

    def reduce(self, vec) -> list:
        vec = list(vec)
        for col, prow in zip(self.pivots, self.rows):
            f = vec[col]
            if not f.is_zero():
                piv = prow[col]
                vec = [piv * a - f * b for a, b in zip(vec, prow)]
        return vec

    def member(self, vec) -> bool:
        return all(x.is_zero() for x in self.reduce(vec))

    def normalized_rows(self) -> list:
        """The rows rescaled to pivot entry 1 (basis of the same span).

        When every entry is a K-multiple of the pivot (always the case for a
        subspace defined over K, whose reduced echelon rows are K-rational)
        the rescaling is pure coordinate division; tower inversion is the
        fallback for genuinely L-irrational rows.
        """
        if self._normalized is None:
            out = []
            for col, row in zip(self.pivots, self.rows):
                ratios = [_k_ratio(x, row[col]) for x in row]
                if all(c is not None for c in ratios):
                    out.append([self.spec.scalar(c) for c in ratios])
                else:
                    inv = elt_inverse(row[col])
                    out.append([x * inv for x in row])
            self._normalized = out
        return self._normalized

    def coords_in_normalized(self, vec):
        """Coefficients writing vec over normalized_rows(), or None."""
        vec = list(vec)
        cs = []
        for col, nrow in zip(self.pivots, self.normalized_rows()):
            f = vec[col]
            cs.append(f)
            if not f.is_zero():
                vec = [a - f * b for a, b in zip(vec, nrow)]
        if any(not x.is_zero() for x in vec):
            return None
        return cs


def _k_ratio(x, y):
    """The scalar c in K with x = c*y, or None; y must be nonzero."""
    fx = x.coord_vector()
    fy = y.coord_vector()
    j = next(i for i, v in enumerate(fy) if not v.is_zero())
    c = fx[j] / fy[j]
    if all((a - c * b).is_zero() for a, b in zip(fx, fy)):
        return c
    return None


def _l_rank(spec, rows) -> int:
    return _LEchelon(spec, rows).rank


def _flatten_tower_vector(vec) -> list:
    out = []
    for x in vec:
        out.extend(x.coord_vector())
    return out


def _flatten_trunc_vector(vec) -> list:
    out = []
    for x in vec:
        for part in x.parts:
            out.extend(part.coord_vector())
    return out


def _normalize_rational_vector(spec, vec) -> list:
    """Canonical K-scaling of a K-rational vector (primitive, monic lead)."""
    flat = linalg.normalize_vector(spec.ring, _flatten_tower_vector(vec))
    N = spec.degree
    return [spec.from_coords(flat[r * N:(r + 1) * N])
            for r in range(len(vec))]


# ------------------------------------------------------------------- reports

DEFINED = "defined_over_K"
NOT_DEFINED = "not_defined_over_K"


class DescentReport:
    """Verdict plus certificate: a K-form on success, a witness on failure."""

    __slots__ = ("verdict", "k_form", "witness", "diagnostics")

    def __init__(self, verdict, k_form=None, witness=None, diagnostics=None):
        if verdict not in (DEFINED, NOT_DEFINED):
            raise InputError("unknown verdict %r" % verdict)
        if (verdict == DEFINED) != (k_form is not None and witness is None):
            raise InternalInconsistency(
                "verdict %s with k_form=%s, witness=%s" % (
                    verdict, k_form is not None, witness is not None))
        self.verdict = verdict
        self.k_form = k_form
        self.witness = witness
        self.diagnostics = list(diagnostics or [])

    @property
    def defined(self) -> bool:
        return self.verdict == DEFINED

    def __repr__(self):
        return "DescentReport(%s)" % self.verdict


# ------------------------------------------------------------------ subspaces

class SubspaceL:
    """L-subspace of L^n given by an L-linearly independent basis."""

    __slots__ = ("spec", "ambient", "basis")

    def __init__(self, spec: TowerSpec, ambient: int, basis):
        basis = [list(v) for v in basis]
        for v in basis:
            if len(v) != ambient:
                raise InputError("basis vector has length %d, ambient is %d"
                                 % (len(v), ambient))
            for x in v:
                if not isinstance(x, TowerElement) or x.spec != spec:
                    raise SpecMismatch("entry from a different tower")
        if basis and _l_rank(spec, basis) != len(basis):
            raise InputError("basis is not L-linearly independent")
        self.spec = spec
        self.ambient = ambient
        self.basis = basis

    def dim(self) -> int:
        return len(self.basis)

    def __repr__(self):
        return "SubspaceL(dim %d in L^%d)" % (len(self.basis), self.ambient)


def oracle_subspace(V_dim: int, W: SubspaceL) -> bool:
    """Brute force: dim_K(W intersect V) = dim_L W, by flat linear algebra."""
    spec = W.spec
    if W.ambient != V_dim:
        raise InputError("ambient dimension mismatch")
    if not W.basis:
        return True
    ring = spec.ring
    n = V_dim
    nflat = n * spec.degree
    rows_w = []
    for v in W.basis:
        for u in spec.basis:
            m = spec.monomial(u)
            rows_w.append(_flatten_tower_vector([x * m for x in v]))
    rows_k = []
    one = spec.one()
    zero = spec.zero()
    for r in range(n):
        vec = [zero] * n
        vec[r] = one
        rows_k.append(_flatten_tower_vector(vec))
    dim = linalg.intersection_dim(ring, rows_w, rows_k, nflat)
    return dim == len(W.basis)


def check_subspace(V_dim: int, W: SubspaceL) -> DescentReport:
    """Decide whether W <= V tensor L is defined over K; certify either way.

    Runs both halves of the equivalence theorem (Hopf generator stability
    and truncated-automorphism stability of W tensor L[Xb]), asserts they
    agree, and on success returns the K-form with an independent rank
    re-verification.
    """
    spec = W.spec
    if W.ambient != V_dim:
        raise InputError("ambient dimension mismatch")
    if not W.basis:
        return DescentReport(DEFINED, k_form=[],
                             diagnostics=["zero subspace"])
    ctx = GhaContext(spec)
    ech = _LEchelon(spec, W.basis)

    gha_witness = None
    for index in _generator_indices(ctx):
        for v in W.basis:
            img = [ctx.act_on_element(index, x) for x in v]
            if not ech.member(img):
                gha_witness = (v, index, img)
                break
        if gha_witness:
            break

    hg_witness = None
    q = spec.p ** spec.exponent
    for name, phi in hg.canonical_generators(spec):
        for v in W.basis:
            img = [phi.apply(from_tower(x)) for x in v]
            bad = None
            for k in range(q):
                part = [x.parts[k] for x in img]
                if not ech.member(part):
                    bad = k
                    break
            if bad is not None:
                hg_witness = (v, name, img)
                break
        if hg_witness:
            break

    if (gha_witness is None) != (hg_witness is None):
        raise InternalInconsistency(
            "subspace stability criteria disagree: GHA says %s, HG says %s"
            % (gha_witness is None, hg_witness is None))

    if gha_witness is not None:
        v, index, img = gha_witness
        return DescentReport(
            NOT_DEFINED,
            witness={"element": v, "generator": format_gha_index(index),
                     "image": img},
            diagnostics=[
                "unstable under %s" % format_gha_index(index),
                "truncated criterion agrees: unstable under %s"
                % hg_witness[1],
            ])

    k = len(W.basis)
    norm = ech.normalized_rows()
    mats = {}
    for index in ctx.basis:
        cols = []
        for b in norm:
            img = [ctx.act_on_element(index, x) for x in b]
            col = ech.coords_in_normalized(img)
            if col is None:
                raise InternalInconsistency(
                    "stable subspace image left the span under %s"
                    % format_gha_index(index))
            cols.append(col)
        mats[index] = cols
    action = SemilinearGhaAction(ctx, k, mats)
    inv = gha_invariants(action)
    if len(inv) != k:
        raise InternalInconsistency(
            "stable subspace has invariant dimension %d, expected %d"
            % (len(inv), k))
    k_form = []
    for coeffs in inv:
        vec = [spec.zero()] * W.ambient
        for c, b in zip(coeffs, norm):
            if not c.is_zero():
                vec = [a + c * x for a, x in zip(vec, b)]
        k_form.append(_normalize_rational_vector(spec, vec))
    _verify_k_form(spec, W, k_form)
    return DescentReport(
        DEFINED, k_form=k_form,
        diagnostics=["both stability criteria pass",
                     "K-form re-verified: rank %d over L" % k])


def _verify_k_form(spec, W, k_form):
    """Independent re-check: K-rational, K-independent, L-spans W."""
    k = len(W.basis)
    for vec in k_form:
        for x in vec:
            if not x.in_base_field():
                raise InternalInconsistency(
                    "computed K-form has a non-rational entry %s" % x)
    flat = [_flatten_tower_vector(vec) for vec in k_form]
    if linalg.rank(spec.ring, flat, len(flat[0]) if flat else 0) != k:
        raise InternalInconsistency("computed K-form is K-dependent")
    if _l_rank(spec, k_form) != k:
        raise InternalInconsistency("computed K-form does not span over L")
    ech = _LEchelon(spec, W.basis)
    for vec in k_form:
        if not ech.member(vec):
            raise InternalInconsistency("computed K-form leaves the subspace")


def random_subspace(spec: TowerSpec, rng, ambient: int, dim: int,
                    rational=False) -> SubspaceL:
    """Random L-subspace; with rational=True the basis is K-rational."""
    ring = spec.ring
    while True:
        basis = []
        for _ in range(dim):
            if rational:
                vec = [spec.scalar(_random_scalar(ring, rng))
                       for _ in range(ambient)]
            else:
                vec = [random_element(spec, rng, maxdeg=1)
                       for _ in range(ambient)]
            basis.append(vec)
        try:
            return SubspaceL(spec, ambient, basis)
        except InputError:
            continue


def _random_scalar(ring, rng):
    num = ring.zero
    for _ in range(rng.randrange(1, 3)):
        exps = tuple(rng.randrange(0, 2) for _ in ring.variables)
        num = num + ring.poly([(exps, rng.randrange(1, ring.p))])
    return ring.rat(num)


# ------------------------------------------------------------- sigma actions

def _tmat_identity(spec, dim):
    one = from_tower(spec.one())
    zero = from_tower(spec.zero())
    return [[one if r == c else zero for r in range(dim)]
            for c in range(dim)]


def _tmat_mul(a, b, spec):
    dim = len(a)
    out = []
    for j in range(dim):
        col = [from_tower(spec.zero()) for _ in range(dim)]
        for s in range(dim):
            x = b[j][s]
            if x.is_zero():
                continue
            for r in range(dim):
                if not a[s][r].is_zero():
                    col[r] = col[r] + a[s][r] * x
        out.append(col)
    return out


def _tmat_twist(phi, mat):
    return [[phi.apply(x) for x in col] for col in mat]


def _tmat_eq(a, b) -> bool:
    return all(x == y for ca, cb in zip(a, b) for x, y in zip(ca, cb))


class SigmaLinearAction:
    """Canonical generator name -> matrix over L[Xb], acting sigma-linearly."""

    __slots__ = ("spec", "dim", "assignment")

    def __init__(self, spec: TowerSpec, dim: int, assignment: dict):
        names = [name for name, _ in hg.canonical_generators(spec)]
        missing = [n for n in names if n not in assignment]
        extra = [n for n in assignment if n not in names]
        if missing:
            raise InputError("missing generator matrices: %s"
                             % ", ".join(missing))
        if extra:
            raise InputError("unknown generator names: %s" % ", ".join(extra))
        for name in names:
            mat = assignment[name]
            if len(mat) != dim or any(len(col) != dim for col in mat):
                raise InputError("matrix for %s has wrong shape" % name)
            for col in mat:
                for x in col:
                    if not isinstance(x, TruncElement) or x.spec != spec:
                        raise SpecMismatch(
                            "matrix entry from a different tower")
        self.spec = spec
        self.dim = dim
        self.assignment = {n: [list(col) for col in assignment[n]]
                           for n in names}

    def __repr__(self):
        return "SigmaLinearAction(dim %d, %d generators)" % (
            self.dim, len(self.assignment))


def validate_action(rho: SigmaLinearAction) -> list:
    """Check invertibility and the sigma-twisted generator relations."""
    spec = rho.spec
    p = spec.p
    gens = dict(hg.canonical_generators(spec))
    ident = _tmat_identity(spec, rho.dim)
    violations = []

    for name in sorted(rho.assignment):
        mat = rho.assignment[name]
        fiber_rows = [[mat[c][r].parts[0] for c in range(rho.dim)]
                      for r in range(rho.dim)]
        if rho.dim and _l_rank(spec, fiber_rows) != rho.dim:
            violations.append("rho(%s) is not invertible" % name)
    if violations:
        return violations

    def twisted(name_a, name_b):
        # matrix of the composite map rho(a) o rho(b): M_a . a(M_b)
        return _tmat_mul(rho.assignment[name_a],
                         _tmat_twist(gens[name_a], rho.assignment[name_b]),
                         spec)

    insep_names = ["phi_%d" % (i + 1) for i in range(len(spec.insep))]
    for name in insep_names:
        acc = rho.assignment[name]
        cur = rho.assignment[name]
        for _ in range(1, p):
            cur = _tmat_twist(gens[name], cur)
            acc = _tmat_mul(acc, cur, spec)
        if not _tmat_eq(acc, ident):
            violations.append(
                "sigma-twisted %s-th power of rho(%s) is not the identity"
                % (p, name))

    group = [g for g in spec.auto_names() if g != "id"]
    for g in group:
        for h in group:
            gh = spec.compose_autos(g, h)
            lhs = twisted("phi_" + g, "phi_" + h)
            rhs = ident if gh == "id" else rho.assignment["phi_" + gh]
            if not _tmat_eq(lhs, rhs):
                violations.append(
                    "group law fails: rho(phi_%s) . %s-twist of rho(phi_%s)"
                    " differs from rho of the product" % (g, g, h))
    for g in group:
        for name in insep_names:
            if not _tmat_eq(twisted("phi_" + g, name),
                            twisted(name, "phi_" + g)):
                violations.append("commutation fails: phi_%s with %s"
                                  % (g, name))
    for i in range(len(insep_names)):
        for j in range(i):
            if not _tmat_eq(twisted(insep_names[i], insep_names[j]),
                            twisted(insep_names[j], insep_names[i])):
                violations.append("commutation fails: %s with %s"
                                  % (insep_names[j], insep_names[i]))
    return violations


def kform_from_action(rho: SigmaLinearAction) -> DescentReport:
    """K-form of a module with a sigma-linear action (extract + invariants)."""
    spec = rho.spec
    violations = validate_action(rho)
    if violations:
        raise ActionValidationFailure("; ".join(violations))
    ctx = GhaContext(spec)
    action = extract_from_hg(ctx, rho.assignment, rho.dim)
    inv = gha_invariants(action)
    diagnostics = []
    if len(inv) != rho.dim:
        raise NotAForm(
            "invariants have K-dimension %d, module dimension is %d"
            % (len(inv), rho.dim),
            ["the generator relations hold but the invariant space is not"
             " a K-form; the data does not come from a genuine action"])
    flat = [_flatten_tower_vector(v) for v in inv]
    if linalg.rank(spec.ring, flat, len(flat[0])) != rho.dim:
        raise NotAForm("invariants are K-linearly dependent", [])
    if _l_rank(spec, inv) != rho.dim:
        raise NotAForm(
            "invariants do not span the module over L",
            ["K-dimension matches but the L-span has rank %d"
             % _l_rank(spec, inv)])
    diagnostics.append("K-form re-verified: %d vector(s), L-span full"
                       % len(inv))
    return DescentReport(DEFINED, k_form=inv, diagnostics=diagnostics)


# ------------------------------------------------------------------ morphisms

def check_morphism(spec: TowerSpec, f) -> DescentReport:
    """Descend a map given by a matrix over L or an algebra-map image dict.

    Equivariance of f tensor id under every canonical generator (acting
    entrywise through the base change of the natural actions) is checked
    against the plain entries-in-K oracle; the two must agree.
    """
    if isinstance(f, dict):
        entries = [("image of %s, coefficient of %s" % (nm, list(mono)), c)
                   for nm in sorted(f)
                   for mono, c in sorted(f[nm].coords.items(),
                                         key=lambda it: groebner._mono_key(it[0]))]
    else:
        entries = [("entry (%d, %d)" % (r, j), f[j][r])
                   for j in range(len(f)) for r in range(len(f[j]))]
    equi_witness = None
    for name, phi in hg.canonical_generators(spec):
        for where, a in entries:
            lift = from_tower(a)
            img = phi.apply(lift)
            if img != lift:
                equi_witness = (where, a, name, img)
                break
        if equi_witness:
            break
    rational = all(a.in_base_field() for _, a in entries)
    if (equi_witness is None) != rational:
        raise InternalInconsistency(
            "equivariance path and entries-in-K oracle disagree")
    if equi_witness is None:
        return DescentReport(
            DEFINED, k_form=f,
            diagnostics=["all %d entries are K-rational; the same matrix"
                         " read over K descends the map" % len(entries)])
    where, a, name, img = equi_witness
    return DescentReport(
        NOT_DEFINED,
        witness={"element": a, "generator": name, "image": img},
        diagnostics=["equivariance fails at %s under %s" % (where, name)])


# ---------------------------------------------------------------------- ideals

def _act_poly(ctx: GhaContext, index, f: PolyL) -> PolyL:
    return PolyL(f.spec, f.names,
                 {e: ctx.act_on_element(index, c)
                  for e, c in f.coords.items()})


def _flatten_polys(spec, polys, monos):
    out = []
    for f in polys:
        row = []
        zero = spec.zero()
        for e in monos:
            row.extend(f.coords.get(e, zero).coord_vector())
        out.append(row)
    return out


def check_ideal(I: PresentedAlgebraL) -> DescentReport:
    """Decide whether the ideal descends; return K-rational generators."""
    spec = I.spec
    ctx = GhaContext(spec)
    gb = groebner_basis(I.gens)
    for index in _generator_indices(ctx):
        for f in I.gens:
            img = _act_poly(ctx, index, f)
            if not ideal_member(img, gb):
                return DescentReport(
                    NOT_DEFINED,
                    witness={"element": f,
                             "generator": format_gha_index(index),
                             "image": img},
                    diagnostics=["%s maps a generator out of the ideal"
                                 % format_gha_index(index)])
    # K-span U of all basis-index images of the generators
    images = [_act_poly(ctx, index, f)
              for index in ctx.basis for f in I.gens]
    monos = sorted({e for f in images for e in f.coords},
                   key=groebner._mono_key)
    ncols = len(monos) * spec.degree
    span = []
    rows = []
    for f in images:
        if f.is_zero():
            continue
        row = _flatten_polys(spec, [f], monos)[0]
        if linalg.rank(spec.ring, rows + [row], ncols) > len(span):
            span.append(f)
            rows.append(row)
    # invariants: K-combinations fixed by the generating set
    constraints = []
    for index in _generator_indices(ctx):
        eps = ctx.counit_index(index)
        cols = []
        for f in span:
            img = _act_poly(ctx, index, f)
            if eps:
                img = img - f
            cols.append(_flatten_polys(spec, [img], monos)[0])
        for r in range(ncols):
            row = [cols[s][r] for s in range(len(span))]
            if any(not x.is_zero() for x in row):
                constraints.append(row)
    kern = linalg.kernel_basis(spec.ring, constraints, len(span))
    k_gens = []
    for lam in kern:
        g = I.zero()
        for c, f in zip(lam, span):
            if not c.is_zero():
                g = g + f * spec.scalar(c)
        if not g.is_zero():
            k_gens.append(g)
    for g in k_gens:
        for c in g.coefficients():
            if not c.in_base_field():
                raise InternalInconsistency(
                    "invariant generator has a non-rational coefficient")
    if not ideal_equal(k_gens, I.gens):
        raise InternalInconsistency(
            "K-rational generators do not generate the original ideal")
    return DescentReport(
        DEFINED, k_form=k_gens,
        diagnostics=["stable under all Hopf generators",
                     "ideal equality of the K-form re-verified by Groebner"
                     " bases in both directions"])


# ------------------------------------------------------------- trunc modules

class FreeTruncModule:
    """Submodule of L[Xb]^n given by a finite list of generating vectors."""

    __slots__ = ("spec", "ambient", "basis")

    def __init__(self, spec: TowerSpec, ambient: int, basis):
        basis = [list(v) for v in basis]
        for v in basis:
            if len(v) != ambient:
                raise InputError("basis vector has length %d, ambient is %d"
                                 % (len(v), ambient))
            for x in v:
                if not isinstance(x, TruncElement) or x.spec != spec:
                    raise SpecMismatch("entry from a different tower")
        self.spec = spec
        self.ambient = ambient
        self.basis = basis

    def fiber(self) -> list:
        """The mod-Xb reduction of the basis."""
        return [[x.parts[0] for x in v] for v in self.basis]

    def __repr__(self):
        return "FreeTruncModule(%d generators in L[Xb]^%d)" % (
            len(self.basis), self.ambient)


def _module_span_rows(Wt: FreeTruncModule):
    """The K-span of the module, as flattened rows."""
    spec = Wt.spec
    q = spec.p ** spec.exponent
    rows = []
    for v in Wt.basis:
        for u in spec.basis:
            m = spec.monomial(u)
            scaled = [x * m for x in v]
            for j in range(q):
                rows.append(_flatten_trunc_vector(
                    [x.shift(j) for x in scaled]))
    return rows


def _kx_ratio(x: TruncElement, y: TruncElement):
    """The scalar c in K[Xb] with x = c*y, or None; y must be a unit."""
    spec = x.spec
    rem = x
    coeffs = []
    for j in range(len(x.parts)):
        c = _k_ratio(rem.parts[j], y.parts[0])
        if c is None:
            return None
        coeffs.append(c)
        if not c.is_zero():
            rem = rem - (from_tower(spec.scalar(c)).shift(j) * y)
    return TruncElement(spec, [spec.scalar(c) for c in coeffs])


def _trunc_jordan(spec, basis):
    """Gauss-Jordan over L[Xb] with unit pivots: (pivot columns, rows with
    pivot entry 1 and zeros at the other pivots), or None when the mod-Xb
    reduction drops rank (the module is not presented by a free basis)."""
    pivcols = []
    nrows = []
    for v in basis:
        row = list(v)
        for pc, prow in zip(pivcols, nrows):
            c = row[pc]
            if not c.is_zero():
                row = [a - c * b for a, b in zip(row, prow)]
        pivot = next((j for j, x in enumerate(row)
                      if not x.parts[0].is_zero()), None)
        if pivot is None:
            return None
        ratios = [_kx_ratio(x, row[pivot]) for x in row]
        if all(r is not None for r in ratios):
            nrow = ratios
        else:
            inv = trunc_invert(row[pivot])
            nrow = [x * inv for x in row]
        for i in range(len(nrows)):
            c = nrows[i][pivot]
            if not c.is_zero():
                nrows[i] = [a - c * b for a, b in zip(nrows[i], nrow)]
        nrows.append(nrow)
        pivcols.append(pivot)
    return pivcols, nrows


def _jordan_reduce(pivcols, nrows, vec) -> list:
    rem = list(vec)
    for pc, nrow in zip(pivcols, nrows):
        c = rem[pc]
        if not c.is_zero():
            rem = [a - c * b for a, b in zip(rem, nrow)]
    return rem


def is_xbar_saturated(Wt: FreeTruncModule):
    """Decide Xb-saturation; returns (flag, witness vector or None).

    v . Xb^j lies in the module for some lift of v exactly when a member of
    the module vanishes below the Xb^j slice and has mod-Xb image of v in
    that slice, so the candidate images are read off from the kernel of the
    lower slices of the module's K-span.
    """
    spec = Wt.spec
    ring = spec.ring
    n = Wt.ambient
    N = spec.degree
    q = spec.p ** spec.exponent
    span = _module_span_rows(Wt)
    if not span:
        return True, None
    fiber_ech = _LEchelon(spec, Wt.fiber())
    for shift in range(1, q):
        rows = []
        for r in range(n):
            for j in range(shift):
                for ui in range(N):
                    slot = r * q * N + j * N + ui
                    row = [span[s][slot] for s in range(len(span))]
                    if any(not x.is_zero() for x in row):
                        rows.append(row)
        for lam in linalg.kernel_basis(ring, rows, len(span)):
            v0 = []
            for r in range(n):
                coords = [ring.rat_zero] * N
                for s, c in enumerate(lam):
                    if c.is_zero():
                        continue
                    base = r * q * N + shift * N
                    for ui in range(N):
                        coords[ui] = coords[ui] + c * span[s][base + ui]
                v0.append(spec.from_coords(coords))
            if all(x.is_zero() for x in v0):
                continue
            if not fiber_ech.member(v0):
                return False, v0
    return True, None


def deformation_descent(V_dim: int, Wt: FreeTruncModule) -> DescentReport:
    """Exponent-1 deformation criterion: free + stable decides the fiber."""
    spec = Wt.spec
    if spec.exponent > 1:
        raise ExponentTooLarge(
            "deformation descent requires exponent 1, tower has %d"
            % spec.exponent)
    if spec.exponent != 1:
        raise InputError("deformation descent requires exponent 1")
    if Wt.ambient != V_dim:
        raise InputError("ambient dimension mismatch")
    if not Wt.basis:
        return DescentReport(DEFINED, k_form=[],
                             diagnostics=["zero module"])
    jordan = _trunc_jordan(spec, Wt.basis)
    if jordan is None:
        raise NotFree("mod-Xb reduction of the basis drops rank")
    pivcols, nrows = jordan
    for name, phi in hg.canonical_generators(spec):
        for v in Wt.basis:
            img = [phi.apply(x) for x in v]
            rem = _jordan_reduce(pivcols, nrows, img)
            if any(not x.is_zero() for x in rem):
                return DescentReport(
                    NOT_DEFINED,
                    witness={"element": v, "generator": name, "image": img},
                    diagnostics=[
                        "the deformation is not invariant under %s" % name])
    ok, bad = is_xbar_saturated(Wt)
    if not ok:
        raise InternalInconsistency(
            "free stable module is not Xb-saturated, witness %s" % (bad,))
    report = check_subspace(V_dim, SubspaceL(spec, V_dim, Wt.fiber()))
    report.diagnostics.insert(
        0, "deformation is free, stable, and Xb-saturated; verdict is for"
           " the closed fiber")
    return report


def random_stable_module(spec: TowerSpec, rng, ambient: int,
                         rank: int) -> FreeTruncModule:
    """Random free generator-stable module: a K[Xb]-unimodular mix of a
    K-rational basis, scaled by a random unit of L[Xb]."""
    q = spec.p ** spec.exponent
    ring = spec.ring
    W0 = random_subspace(spec, rng, ambient, rank, rational=True)
    lifts = [[from_tower(x) for x in v] for v in W0.basis]
    # unimodular transform over K[Xb]: identity plus a strict triangle
    mix = []
    for i in range(rank):
        row = []
        for j in range(rank):
            if i == j:
                row.append(from_tower(spec.one()))
            elif i < j:
                parts = [spec.scalar(_random_scalar(ring, rng))
                         if rng.random() < 0.5 else spec.zero()
                         for _ in range(q)]
                row.append(TruncElement(spec, parts))
            else:
                row.append(from_tower(spec.zero()))
        mix.append(row)
    mixed = []
    for i in range(rank):
        vec = [from_tower(spec.zero()) for _ in range(ambient)]
        for j in range(rank):
            if not mix[i][j].is_zero():
                vec = [a + b * mix[i][j] for a, b in zip(vec, lifts[j])]
        mixed.append(vec)
    # one global unit scalar keeps stability (the twist is a scalar)
    parts = [random_element(spec, rng, maxdeg=1) for _ in range(q)]
    while parts[0].is_zero():
        parts[0] = random_element(spec, rng, maxdeg=1)
    unit = TruncElement(spec, parts)
    basis = [[x * unit for x in v] for v in mixed]
    return FreeTruncModule(spec, ambient, basis)


# -------------------------------------------------------------- descent data

def hg_subgroup(spec: TowerSpec) -> list:
    """Enumerate the subgroup generated by the canonical generators.

    Returns (word, element) pairs in breadth-first order; the identity is
    the word "id" and longer words are generator names joined by "*".
    """
    gens = hg.canonical_generators(spec)
    table = [("id", hg.identity_hg(spec))]
    frontier = list(table)
    while frontier:
        fresh = []
        for word, elt in frontier:
            for name, phi in gens:
                cand = hg.hg_compose(phi, elt)
                if any(cand == have for _, have in table):
                    continue
                grown = name if word == "id" else name + "*" + word
                table.append((grown, cand))
                fresh.append((grown, cand))
        frontier = fresh
    return table


def verify_descent_datum(spec: TowerSpec, assignment: dict, dim: int) -> list:
    """Check the cocycle identity on the full finite subgroup.

    The assignment maps canonical generator names to matrices over L[Xb];
    it is extended along words, well-definedness of the extension is part
    of the check, and every pair (sigma, tau) is tested against
    M_sigma . sigma(M_tau) = M_(sigma tau).  Returns a list of violations.
    """
    names = [name for name, _ in hg.canonical_generators(spec)]
    missing = [n for n in names if n not in assignment]
    if missing:
        raise InputError("missing generator matrices: %s"
                         % ", ".join(missing))
    gens = dict(hg.canonical_generators(spec))
    violations = []
    table = [("id", hg.identity_hg(spec), _tmat_identity(spec, dim))]
    frontier = list(table)
    while frontier:
        fresh = []
        for word, elt, mat in frontier:
            for name in names:
                phi = gens[name]
                cand = hg.hg_compose(phi, elt)
                grown = name if word == "id" else name + "*" + word
                cmat = _tmat_mul(assignment[name],
                                 _tmat_twist(phi, mat), spec)
                hit = next(((w, m) for w, have, m in table if have == cand),
                           None)
                if hit is None:
                    table.append((grown, cand, cmat))
                    fresh.append((grown, cand, cmat))
                elif not _tmat_eq(cmat, hit[1]):
                    violations.append(
                        "words %s and %s assign different matrices to the"
                        " same element" % (grown, hit[0]))
        frontier = fresh
    for w1, s, ms in table:
        for w2, t, mt in table:
            st = hg.hg_compose(s, t)
            target = next(m for _, have, m in table if have == st)
            got = _tmat_mul(ms, _tmat_twist(s, mt), spec)
            if not _tmat_eq(got, target):
                violations.append("cocycle fails at (%s, %s)" % (w1, w2))
    return violations
