"""The Galois-Hopf algebra of a tower and its semilinear actions.

GHA(L/K) is the tensor product of the group algebra K[G] of the separable
part with one divided-power algebra per inseparable generator.  Its basis is
indexed by pairs (g, k) of a group element and an exponent tuple
k = (k_1..k_m), 0 <= k_i < p^(n_i); multiplication is the group law on the
left factor and binomial convolution D^(h) D^(k) = binom(h+k, h) D^(h+k)
(vanishing past the range) on each divided-power factor, with the binomials
reduced mod p by Lucas' theorem.  Comultiplication is grouplike on D_g and
divided-power on the D_i^(k); the antipode is S(D_g) = D_(g^-1),
S(D_i^(k)) = (-1)^k D_i^(k), and the antipode axiom is re-verified on every
basis element when a context is built.

The algebra acts on L by D_g(alpha_0) = g(alpha_0) and
D_i^(k)(alpha_i^l) = binom(l, k) alpha_i^(l-k); a semilinear action on an
L-module extends matrices on a fixed basis to all vectors through the
comultiplication: D(a.v) = sum D'(a) D''(v).
"""

import itertools
import math

from .errors import (ContextMismatch, InputError, InternalInconsistency,
                     SemilinearityFailure, SpecMismatch)
from . import linalg
from .tower import IDENTITY_AUTO, TowerElement, TowerSpec


def lucas_binom(a: int, b: int, p: int) -> int:
    """binom(a, b) mod p via Lucas' theorem on base-p digits."""
    if b < 0 or b > a:
        return 0
    r = 1
    while b:
        r = r * math.comb(a % p, b % p) % p
        if r == 0:
            return 0
        a //= p
        b //= p
    return r


def format_gha_index(index) -> str:
    g, kvec = index
    parts = []
    if g != IDENTITY_AUTO:
        parts.append("D_" + g)
    for i, k in enumerate(kvec):
        if k:
            parts.append("D_%d^(%d)" % (i + 1, k))
    return "*".join(parts) if parts else "1"


class GhaContext:
    """Basis enumeration, structure constants, and the action on L."""

    def __init__(self, spec: TowerSpec):
        self.spec = spec
        self.p = spec.p
        self.group = spec.auto_names()
        self.basis = [
            (g, kvec) for g in self.group
            for kvec in itertools.product(*[range(q) for q in spec.insep_orders])
        ]
        self.basis_index = {ix: i for i, ix in enumerate(self.basis)}
        self.dim = len(self.basis)
        self._act_cache = {}
        self._verify_antipode()

    # -- elements -------------------------------------------------------------

    def element(self, coords) -> "GhaElement":
        return GhaElement(self, dict(coords))

    def basis_element(self, g, kvec) -> "GhaElement":
        index = (g, tuple(kvec))
        if index not in self.basis_index:
            raise InputError("no such basis index: %s, %s" % (g, kvec))
        return GhaElement(self, {index: self.spec.ring.rat_one})

    def unit(self) -> "GhaElement":
        zero_k = tuple(0 for _ in self.spec.insep)
        return self.basis_element(IDENTITY_AUTO, zero_k)

    def zero(self) -> "GhaElement":
        return GhaElement(self, {})

    # -- structure constants ---------------------------------------------------

    def mul_index(self, ix, iy):
        """Product of two basis indices: (coefficient mod p, index) or None."""
        (g1, k1), (g2, k2) = ix, iy
        coeff = 1
        ks = []
        for a, b, q in zip(k1, k2, self.spec.insep_orders):
            if a + b >= q:
                return None
            coeff = coeff * lucas_binom(a + b, a, self.p) % self.p
            if coeff == 0:
                return None
            ks.append(a + b)
        return coeff, (self.spec.compose_autos(g1, g2), tuple(ks))

    def comul_pairs(self, index):
        """Delta on a basis index: list of (left, right) pairs, coefficient 1."""
        g, kvec = index
        out = []
        for hvec in itertools.product(*[range(k + 1) for k in kvec]):
            rest = tuple(k - h for k, h in zip(kvec, hvec))
            out.append(((g, hvec), (g, rest)))
        return out

    def counit_index(self, index) -> int:
        g, kvec = index
        return 1 if not any(kvec) else 0

    def antipode_index(self, index):
        """(sign mod p, index) of S on a basis element."""
        g, kvec = index
        sign = (-1) ** (sum(kvec) % 2) % self.p
        return sign, (self.spec.auto_inverse[g], kvec)

    def _verify_antipode(self):
        # m o (S x id) o Delta = unit . counit, on every basis element
        zero_k = tuple(0 for _ in self.spec.insep)
        unit_ix = (IDENTITY_AUTO, zero_k)
        for index in self.basis:
            acc = {}
            for left, right in self.comul_pairs(index):
                sign, s_ix = self.antipode_index(left)
                hit = self.mul_index(s_ix, right)
                if hit is None:
                    continue
                coeff, prod = hit
                c = sign * coeff % self.p
                if c:
                    acc[prod] = (acc.get(prod, 0) + c) % self.p
            acc = {ix: c for ix, c in acc.items() if c}
            want = {unit_ix: 1} if self.counit_index(index) else {}
            if acc != want:
                raise InternalInconsistency(
                    "antipode axiom fails on %s" % format_gha_index(index))

    # -- action on L ------------------------------------------------------------

    def _act_monomial(self, index, u) -> TowerElement:
        key = (index, u)
        hit = self._act_cache.get(key)
        if hit is None:
            spec = self.spec
            g, kvec = index
            coeff = 1
            for j, k in zip(u[1:], kvec):
                coeff = coeff * lucas_binom(j, k, self.p) % self.p
                if coeff == 0:
                    break
            if coeff == 0:
                hit = spec.zero()
            else:
                rest = (0,) + tuple(j - k for j, k in zip(u[1:], kvec))
                hit = spec.monomial(rest) * coeff
                if u[0]:
                    hit = hit * spec.auto_image(g) ** u[0]
            self._act_cache[key] = hit
        return hit

    def act_on_element(self, index, x: TowerElement) -> TowerElement:
        if x.spec != self.spec:
            raise SpecMismatch("element from a different tower")
        acc = self.spec.zero()
        for u, c in x.coords.items():
            acc = acc + self._act_monomial(index, u) * c
        return acc

    def __eq__(self, other):
        if not isinstance(other, GhaContext):
            return NotImplemented
        return self.spec == other.spec

    def __repr__(self):
        return "GhaContext(dim=%d over %r)" % (self.dim, self.spec)


class GhaElement:
    """K-linear combination of basis indices; sparse coordinate dict."""

    __slots__ = ("ctx", "coords")

    def __init__(self, ctx: GhaContext, coords: dict):
        self.ctx = ctx
        self.coords = {ix: c for ix, c in coords.items() if not c.is_zero()}

    def _check(self, other):
        if self.ctx != other.ctx:
            raise ContextMismatch("elements of different Galois-Hopf algebras")

    def is_zero(self) -> bool:
        return not self.coords

    def __add__(self, other):
        if not isinstance(other, GhaElement):
            return NotImplemented
        self._check(other)
        out = dict(self.coords)
        for ix, c in other.coords.items():
            s = out.get(ix)
            out[ix] = c if s is None else s + c
        return GhaElement(self.ctx, out)

    def __sub__(self, other):
        if not isinstance(other, GhaElement):
            return NotImplemented
        self._check(other)
        out = dict(self.coords)
        for ix, c in other.coords.items():
            s = out.get(ix)
            out[ix] = -c if s is None else s - c
        return GhaElement(self.ctx, out)

    def __neg__(self):
        return GhaElement(self.ctx, {ix: -c for ix, c in self.coords.items()})

    def scale(self, c) -> "GhaElement":
        if isinstance(c, int):
            c = self.ctx.spec.ring.rat(c)
        return GhaElement(self.ctx, {ix: v * c for ix, v in self.coords.items()})

    def __mul__(self, other):
        if isinstance(other, GhaElement):
            return gha_mul(self, other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, GhaElement):
            return NotImplemented
        return self.ctx == other.ctx and self.coords == other.coords

    def __str__(self):
        if not self.coords:
            return "0"
        items = []
        for ix in sorted(self.coords, key=lambda ix: (ix[1], ix[0])):
            c = self.coords[ix]
            name = format_gha_index(ix)
            cs = str(c)
            if cs == "1":
                items.append(name)
            else:
                if "+" in cs or "-" in cs[1:]:
                    cs = "(" + cs + ")"
                items.append(cs + "*" + name)
        return " + ".join(items)

    def __repr__(self):
        return "<gha %s>" % self


# ------------------------------------------------------------- hopf operations

def gha_mul(x: GhaElement, y: GhaElement) -> GhaElement:
    x._check(y)
    ctx = x.ctx
    out = {}
    for ix, cx in x.coords.items():
        for iy, cy in y.coords.items():
            hit = ctx.mul_index(ix, iy)
            if hit is None:
                continue
            coeff, prod = hit
            term = cx * cy * coeff
            s = out.get(prod)
            out[prod] = term if s is None else s + term
    return GhaElement(ctx, out)


def gha_comul(x: GhaElement) -> dict:
    """Delta(x) as a sparse dict (left index, right index) -> RatFunc."""
    out = {}
    for ix, c in x.coords.items():
        for pair in x.ctx.comul_pairs(ix):
            s = out.get(pair)
            out[pair] = c if s is None else s + c
    return {pair: c for pair, c in out.items() if not c.is_zero()}


def gha_counit(x: GhaElement):
    ring = x.ctx.spec.ring
    acc = ring.rat_zero
    for ix, c in x.coords.items():
        if x.ctx.counit_index(ix):
            acc = acc + c
    return acc


def gha_antipode(x: GhaElement) -> GhaElement:
    out = {}
    for ix, c in x.coords.items():
        sign, s_ix = x.ctx.antipode_index(ix)
        term = c * sign
        s = out.get(s_ix)
        out[s_ix] = term if s is None else s + term
    return GhaElement(x.ctx, out)


def act_on_L(ctx: GhaContext, index, x: TowerElement) -> TowerElement:
    """Action of a basis index on an element of L."""
    return ctx.act_on_element(index, x)


# ------------------------------------------------------------ semilinear actions

class SemilinearGhaAction:
    """An L-module with one matrix over L per basis index.

    Matrices are lists of columns; column j holds the coordinates of the
    image of the j-th basis vector.  The action on an arbitrary vector
    factors through the comultiplication: D(a.v) = sum D'(a) D''(v).
    """

    __slots__ = ("ctx", "dim", "mats")

    def __init__(self, ctx: GhaContext, dim: int, mats: dict):
        for index in ctx.basis:
            if index not in mats:
                raise InputError("missing action matrix for %s"
                                 % format_gha_index(index))
            mat = mats[index]
            if len(mat) != dim or any(len(col) != dim for col in mat):
                raise InputError("action matrix for %s has wrong shape"
                                 % format_gha_index(index))
        self.ctx = ctx
        self.dim = dim
        self.mats = dict(mats)

    def matrix(self, index) -> list:
        return self.mats[index]

    def apply(self, index, vec) -> list:
        """D(vec) for vec a list of TowerElements in the fixed basis."""
        ctx = self.ctx
        spec = ctx.spec
        out = [spec.zero() for _ in range(self.dim)]
        for left, right in ctx.comul_pairs(index):
            mat = self.mats[right]
            for j, a in enumerate(vec):
                if a.is_zero():
                    continue
                s = ctx.act_on_element(left, a)
                if s.is_zero():
                    continue
                col = mat[j]
                for r in range(self.dim):
                    if not col[r].is_zero():
                        out[r] = out[r] + s * col[r]
        return out

    def __eq__(self, other):
        if not isinstance(other, SemilinearGhaAction):
            return NotImplemented
        return (self.ctx == other.ctx and self.dim == other.dim
                and all(self.mats[ix] == other.mats[ix]
                        for ix in self.ctx.basis))

    def __repr__(self):
        return "SemilinearGhaAction(dim=%d, %r)" % (self.dim, self.ctx)


def natural_action(ctx: GhaContext, dim: int) -> SemilinearGhaAction:
    """Base change of the trivial action: each D acts as counit(D) . identity
    on the K-rational basis, so K-rational vectors transform by the counit."""
    spec = ctx.spec
    zero, one = spec.zero(), spec.one()
    mats = {}
    for index in ctx.basis:
        e = ctx.counit_index(index)
        mats[index] = [[one if (r == c and e) else zero
                        for r in range(dim)] for c in range(dim)]
    return SemilinearGhaAction(ctx, dim, mats)


def _generator_indices(ctx: GhaContext):
    """The generating set: nontrivial group elements and single-factor powers."""
    spec = ctx.spec
    zero_k = tuple(0 for _ in spec.insep)
    gens = []
    for g in ctx.group:
        if g != IDENTITY_AUTO:
            gens.append((g, zero_k))
    for i, q in enumerate(spec.insep_orders):
        for k in range(1, q):
            kvec = list(zero_k)
            kvec[i] = k
            gens.append((IDENTITY_AUTO, tuple(kvec)))
    return gens


def verify_semilinear(action: SemilinearGhaAction) -> list:
    """Check the module relations and semilinearity; returns violations."""
    ctx = action.ctx
    spec = ctx.spec
    zero_k = tuple(0 for _ in spec.insep)
    violations = []

    samples = []
    for u in spec.basis:
        a = spec.monomial(u)
        for j in range(action.dim):
            vec = [spec.zero()] * action.dim
            vec[j] = a
            samples.append((str(a), j, vec))

    def on_samples(tag, f, g):
        for name, j, vec in samples:
            got = f(vec)
            want = g(vec)
            if got != want:
                violations.append("%s fails on %s . e_%d" % (tag, name, j))
                return

    group = [g for g in ctx.group if g != IDENTITY_AUTO]
    for g in group:
        for h in group:
            gh = spec.compose_autos(g, h)
            on_samples(
                "group law D_%s D_%s = D_%s" % (g, h, gh),
                lambda v, g=g, h=h: action.apply((g, zero_k),
                                                 action.apply((h, zero_k), v)),
                lambda v, gh=gh: action.apply((gh, zero_k), v))
    singles = [(i, k) for i, q in enumerate(spec.insep_orders)
               for k in range(1, q)]

    def single(i, k):
        kvec = list(zero_k)
        kvec[i] = k
        return (IDENTITY_AUTO, tuple(kvec))

    for g in group:
        for i, k in singles:
            on_samples(
                "commutation [D_%d^(%d), D_%s]" % (i + 1, k, g),
                lambda v, g=g, i=i, k=k: action.apply(
                    (g, zero_k), action.apply(single(i, k), v)),
                lambda v, g=g, i=i, k=k: action.apply(
                    single(i, k), action.apply((g, zero_k), v)))
    for i, h in singles:
        for j, k in singles:
            if i == j:
                q = spec.insep_orders[i]
                c = lucas_binom(h + k, h, spec.p) if h + k < q else 0

                def rhs(v, i=i, h=h, k=k, c=c):
                    if c == 0:
                        return [spec.zero()] * action.dim
                    w = action.apply(single(i, h + k), v)
                    return [x * c for x in w]

                on_samples(
                    "composition D_%d^(%d) D_%d^(%d)" % (i + 1, h, i + 1, k),
                    lambda v, i=i, h=h, k=k: action.apply(
                        single(i, h), action.apply(single(i, k), v)),
                    rhs)
            elif i < j:
                on_samples(
                    "commutation [D_%d^(%d), D_%d^(%d)]" % (i + 1, h, j + 1, k),
                    lambda v, i=i, h=h, j=j, k=k: action.apply(
                        single(i, h), action.apply(single(j, k), v)),
                    lambda v, i=i, h=h, j=j, k=k: action.apply(
                        single(j, k), action.apply(single(i, h), v)))
    return violations


def gha_invariants(action: SemilinearGhaAction) -> list:
    """K-basis of {v : D v = counit(D) v for all D}, via one kernel solve."""
    ctx = action.ctx
    spec = ctx.spec
    n = spec.degree
    dim = action.dim
    if dim == 0:
        return []
    ncols = n * dim
    rows = []
    for D in _generator_indices(ctx):
        eps = ctx.counit_index(D)
        cols = []
        for j in range(dim):
            for u in spec.basis:
                vec = [spec.zero()] * dim
                vec[j] = spec.monomial(u)
                img = action.apply(D, vec)
                if eps:
                    img = [x - y for x, y in zip(img, vec)]
                flat = []
                for x in img:
                    flat.extend(x.coord_vector())
                cols.append(flat)
        for r in range(n * dim):
            row = [cols[c][r] for c in range(ncols)]
            if any(not e.is_zero() for e in row):
                rows.append(row)
    vecs = linalg.kernel_basis(spec.ring, rows, ncols)
    out = []
    for v in vecs:
        entry = []
        for j in range(dim):
            entry.append(spec.from_coords(v[j * n:(j + 1) * n]))
        out.append(entry)
    return out


def extract_from_hg(ctx: GhaContext, rho: dict, dim: int) -> SemilinearGhaAction:
    """Read a semilinear GHA action off matrices for the canonical generators.

    rho maps each canonical generator name to its matrix over L[Xb] (a list
    of columns of TruncElements).  The single-factor matrices are the Xb
    coefficient blocks: D_i^(k) is the Xb^(k p^(e-n_i)) block of rho(phi_i)
    and D_g is the Xb^0 block of rho(phi_g); composite indices follow by
    operator composition.  The result must pass verify_semilinear.
    """
    spec = ctx.spec
    zero_k = tuple(0 for _ in spec.insep)
    one_mat = [[spec.one() if r == c else spec.zero() for r in range(dim)]
               for c in range(dim)]

    def block(mat, j):
        return [[entry.parts[j] for entry in col] for col in mat]

    mats = {(IDENTITY_AUTO, zero_k): one_mat}
    for g in ctx.group:
        if g == IDENTITY_AUTO:
            continue
        name = "phi_" + g
        if name not in rho:
            raise InputError("rho is missing the generator %s" % name)
        mats[(g, zero_k)] = block(rho[name], 0)
    singles = {}
    for i, (nm, ni, _) in enumerate(spec.insep):
        name = "phi_%d" % (i + 1)
        if name not in rho:
            raise InputError("rho is missing the generator %s" % name)
        shift = spec.p ** (spec.exponent - ni)
        for k in range(1, spec.insep_orders[i]):
            kvec = list(zero_k)
            kvec[i] = k
            singles[(i, k)] = block(rho[name], k * shift)
            mats[(IDENTITY_AUTO, tuple(kvec))] = singles[(i, k)]

    partial = dict(mats)

    def apply_single(i, k, vec):
        # D_i^(k) on an arbitrary vector, using only single-factor matrices
        out = [spec.zero() for _ in range(dim)]
        for h in range(k + 1):
            kv = list(zero_k)
            kv[i] = h
            left = (IDENTITY_AUTO, tuple(kv))
            mat = one_mat if k - h == 0 else singles[(i, k - h)]
            for j, a in enumerate(vec):
                if a.is_zero():
                    continue
                s = ctx.act_on_element(left, a)
                if s.is_zero():
                    continue
                col = mat[j]
                for r in range(dim):
                    if not col[r].is_zero():
                        out[r] = out[r] + s * col[r]
        return out

    for index in ctx.basis:
        if index in partial:
            continue
        g, kvec = index
        cols = []
        base = partial[(g, zero_k)]
        for j in range(dim):
            v = list(base[j])
            for i, k in enumerate(kvec):
                if k:
                    v = apply_single(i, k, v)
            cols.append(v)
        partial[index] = cols
    action = SemilinearGhaAction(ctx, dim, partial)
    problems = verify_semilinear(action)
    if problems:
        raise SemilinearityFailure(
            "extracted data is not a semilinear action: " + "; ".join(problems))
    return action
