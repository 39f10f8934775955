"""Higher derivations and the Heerema-Galois group of a tower.

A higher derivation of rank N relative to K is a family d^(0)..d^(N) of
K-linear maps on L with d^(0) the identity and the Leibniz rule
d^(k)(ab) = sum_{i+j=k} d^(i)(a) d^(j)(b).  Packaging a rank p^e - 1 family
as a -> sum_k d^(k)(a) Xb^k gives a K[Xb]-algebra automorphism of L[Xb];
this map (delta) is a group isomorphism onto the subgroup A0 of the
Heerema-Galois group HG(L/K), the automorphisms that reduce to the identity
mod Xb.  The full group is generated by A0 together with the lifts of the
classical Galois group of the separable part, and every member is pinned
down by its generator images: a root image for the separable generator and
truncated images with the structural form alpha_i + sum_{k >= p^(e-n_i)}
c_k Xb^k for the inseparable ones.
"""

import random

from .errors import (InputError, InternalInconsistency, NotInA0, NotLeibniz,
                     RankMismatch, SpecMismatch)
from . import linalg
from .tower import IDENTITY_AUTO, TowerElement, TowerSpec, random_element
from .truncated import TruncElement, from_tower, xbar_valuation
from . import truncated


# ----------------------------------------------------------- K-linear matrices
# A map matrix is a list of columns; column u holds the coordinates (RatFunc)
# of the image of the u-th basis monomial.

def _mat_identity(spec: TowerSpec) -> list:
    n = spec.degree
    zero, one = spec.ring.rat_zero, spec.ring.rat_one
    return [[one if r == c else zero for r in range(n)] for c in range(n)]


def _mat_zero(spec: TowerSpec) -> list:
    n = spec.degree
    zero = spec.ring.rat_zero
    return [[zero] * n for _ in range(n)]


def _mat_apply(spec: TowerSpec, mat: list, x: TowerElement) -> TowerElement:
    vec = [spec.ring.rat_zero] * spec.degree
    for u, c in x.coords.items():
        col = mat[spec.basis_index[u]]
        for r in range(spec.degree):
            e = col[r]
            if not e.is_zero():
                vec[r] = vec[r] + e * c
    return spec.from_coords(vec)


def _mat_mul(spec: TowerSpec, a: list, b: list) -> list:
    """Matrix of the composite map x -> a(b(x))."""
    n = spec.degree
    zero = spec.ring.rat_zero
    out = []
    for u in range(n):
        col = [zero] * n
        bc = b[u]
        for v in range(n):
            s = bc[v]
            if s.is_zero():
                continue
            ac = a[v]
            for r in range(n):
                e = ac[r]
                if not e.is_zero():
                    col[r] = col[r] + e * s
        out.append(col)
    return out


def _mat_add(spec: TowerSpec, a: list, b: list) -> list:
    n = spec.degree
    return [[a[c][r] + b[c][r] for r in range(n)] for c in range(n)]


def _mat_eq(a: list, b: list) -> bool:
    return all(x == y for ca, cb in zip(a, b) for x, y in zip(ca, cb))


# ------------------------------------------------------------ higher derivation

class HigherDerivation:
    """Rank-N family of K-linear maps, d^(0) = id, as basis matrices.

    The Leibniz rule is NOT checked at construction (products build these in
    bulk); verify_leibniz performs the full finite check and delta insists
    on it before packaging the family as an automorphism.
    """

    __slots__ = ("spec", "rank", "maps")

    def __init__(self, spec: TowerSpec, maps: list):
        if not maps:
            raise InputError("a higher derivation needs at least d^(0)")
        n = spec.degree
        for mat in maps:
            if len(mat) != n or any(len(col) != n for col in mat):
                raise InputError("derivation matrix has wrong shape")
        if not _mat_eq(maps[0], _mat_identity(spec)):
            raise InputError("d^(0) must be the identity map")
        self.spec = spec
        self.rank = len(maps) - 1
        self.maps = [list(list(col) for col in mat) for mat in maps]

    def apply(self, k: int, x: TowerElement) -> TowerElement:
        """d^(k)(x)."""
        return _mat_apply(self.spec, self.maps[k], x)

    def __eq__(self, other):
        if not isinstance(other, HigherDerivation):
            return NotImplemented
        return (self.spec == other.spec and self.rank == other.rank
                and all(_mat_eq(a, b) for a, b in zip(self.maps, other.maps)))

    def __repr__(self):
        return "HigherDerivation(rank=%d, degree=%d)" % (
            self.rank, self.spec.degree)


def trivial_derivation(spec: TowerSpec, rank: int) -> HigherDerivation:
    maps = [_mat_identity(spec)] + [_mat_zero(spec) for _ in range(rank)]
    return HigherDerivation(spec, maps)


def derivation_from_images(spec: TowerSpec, rank: int, images: dict) -> HigherDerivation:
    """Build a family from sparse data: images maps (k, basis tuple) to the
    TowerElement value of d^(k) on that basis monomial; omitted entries are 0.
    """
    maps = [_mat_identity(spec)]
    for k in range(1, rank + 1):
        mat = _mat_zero(spec)
        for (kk, u), val in images.items():
            if kk == k:
                mat[spec.basis_index[u]] = val.coord_vector()
        maps.append(mat)
    return HigherDerivation(spec, maps)


def verify_leibniz(d: HigherDerivation) -> None:
    """Full finite Leibniz check; raises NotLeibniz with a witness."""
    spec = d.spec
    basis = spec.basis
    n = len(basis)
    images = [[d.apply(k, spec.monomial(u)) for u in basis]
              for k in range(d.rank + 1)]
    for ui in range(n):
        for wi in range(ui, n):
            prod = spec.monomial(basis[ui]) * spec.monomial(basis[wi])
            for k in range(d.rank + 1):
                lhs = d.apply(k, prod)
                rhs = spec.zero()
                for i in range(k + 1):
                    rhs = rhs + images[i][ui] * images[k - i][wi]
                if lhs != rhs:
                    raise NotLeibniz(
                        "Leibniz fails at d^(%d) on basis pair %s, %s"
                        % (k, basis[ui], basis[wi]))


def hd_product(d: HigherDerivation, d2: HigherDerivation) -> HigherDerivation:
    """Group law: f^(k) = sum_{i+j=k} d^(i) o d2^(j)."""
    if d.spec != d2.spec:
        raise SpecMismatch("higher derivations over different towers")
    if d.rank != d2.rank:
        raise RankMismatch("ranks %d and %d differ" % (d.rank, d2.rank))
    spec = d.spec
    maps = []
    for k in range(d.rank + 1):
        acc = _mat_zero(spec)
        for i in range(k + 1):
            acc = _mat_add(spec, acc, _mat_mul(spec, d.maps[i], d2.maps[k - i]))
        maps.append(acc)
    return HigherDerivation(spec, maps)


# ------------------------------------------------------------------ HG elements

class HGElement:
    """Automorphism of L[Xb] over K[Xb], stored by generator images.

    image_sep is an element of L (None when the tower has no separable
    generator): the separable minimal polynomial has a unit derivative at
    each root, so its roots in L[Xb] already lie in L.  image_insep[i] is a
    TruncElement; the constructor enforces the structural form
    alpha_i + sum_{k >= p^(e-n_i)} c_k Xb^k, which is exactly the condition
    image^(p^n_i) = a_i under the truncation.
    """

    __slots__ = ("spec", "image_sep", "image_insep", "sep_auto", "_mono_images")

    def __init__(self, spec: TowerSpec, image_sep, image_insep):
        self.spec = spec
        q = spec.p ** spec.exponent
        if spec.sep_name is None:
            if image_sep is not None:
                raise InputError("tower has no separable generator to map")
            self.sep_auto = IDENTITY_AUTO
        else:
            if not isinstance(image_sep, TowerElement):
                raise InputError("image of the separable generator must be "
                                 "an element of L")
            if image_sep.spec != spec:
                raise SpecMismatch("separable image from a different tower")
            name = spec.auto_of_root(image_sep)
            if name is None:
                raise InputError("separable image is not g(%s) for any group "
                                 "element g" % spec.sep_name)
            self.sep_auto = name
        image_insep = list(image_insep)
        if len(image_insep) != len(spec.insep):
            raise InputError("expected %d inseparable images, got %d"
                             % (len(spec.insep), len(image_insep)))
        for i, img in enumerate(image_insep):
            nm, n, _ = spec.insep[i]
            if not isinstance(img, TruncElement) or img.spec != spec:
                raise SpecMismatch("inseparable image %s from a different "
                                   "tower" % nm)
            if len(img.parts) != q:
                raise InputError("inseparable image of %s has rank %d, "
                                 "expected %d" % (nm, len(img.parts), q))
            if img.parts[0] != spec.generator(nm):
                raise InputError("image of %s must reduce to %s mod Xb"
                                 % (nm, nm))
            lead = spec.p ** (spec.exponent - n)
            for k in range(1, lead):
                if not img.parts[k].is_zero():
                    raise InputError(
                        "image of %s violates the structural form: Xb^%d "
                        "coefficient must vanish below Xb^%d" % (nm, k, lead))
        self.image_sep = image_sep
        self.image_insep = image_insep
        self._mono_images = {}

    @property
    def is_in_a0(self) -> bool:
        """True when the mod-Xb reduction is the identity of L."""
        return self.sep_auto == IDENTITY_AUTO

    def is_identity(self) -> bool:
        if self.sep_auto != IDENTITY_AUTO:
            return False
        return all(img == from_tower(self.spec.generator(nm))
                   for img, (nm, _, _) in zip(self.image_insep, self.spec.insep))

    def __eq__(self, other):
        if not isinstance(other, HGElement):
            return NotImplemented
        return (self.spec == other.spec and self.image_sep == other.image_sep
                and self.image_insep == other.image_insep)

    def _monomial_image(self, u) -> TruncElement:
        img = self._mono_images.get(u)
        if img is None:
            spec = self.spec
            head = (spec.one() if u[0] == 0 or self.image_sep is None
                    else self.image_sep ** u[0])
            img = from_tower(head)
            for i, j in enumerate(u[1:]):
                if j:
                    img = img * self.image_insep[i] ** j
            self._mono_images[u] = img
        return img

    def apply(self, x: TruncElement) -> TruncElement:
        """The unique K[Xb]-algebra extension, evaluated at x."""
        if x.spec != self.spec:
            raise SpecMismatch("element from a different tower")
        acc = truncated.zero(self.spec, rank=len(x.parts))
        for k, part in enumerate(x.parts):
            for u, c in part.coords.items():
                acc = acc + (self._monomial_image(u) * c).shift(k)
        return acc

    def __repr__(self):
        gens = []
        if self.spec.sep_name is not None:
            gens.append("%s->%s" % (self.spec.sep_name, self.image_sep))
        for img, (nm, _, _) in zip(self.image_insep, self.spec.insep):
            gens.append("%s->%s" % (nm, img))
        return "HGElement(%s)" % ", ".join(gens)


def identity_hg(spec: TowerSpec) -> HGElement:
    sep = None if spec.sep_name is None else spec.auto_image(IDENTITY_AUTO)
    insep = [from_tower(spec.generator(nm)) for nm, _, _ in spec.insep]
    return HGElement(spec, sep, insep)


# --------------------------------------------------------- delta and its inverse

def delta(d: HigherDerivation) -> HGElement:
    """Package a verified rank p^e - 1 family as the automorphism
    a -> sum_k d^(k)(a) Xb^k; lands in A0."""
    spec = d.spec
    q = spec.p ** spec.exponent
    if d.rank != q - 1:
        raise RankMismatch("delta needs rank %d, got %d" % (q - 1, d.rank))
    verify_leibniz(d)

    def image_of(x: TowerElement) -> TruncElement:
        return TruncElement(spec, [d.apply(k, x) for k in range(q)])

    if spec.sep_name is None:
        sep = None
    else:
        img = image_of(spec.generator(spec.sep_name))
        for k in range(1, q):
            if not img.parts[k].is_zero():
                # separable elements are constants of every higher derivation
                raise InternalInconsistency(
                    "verified family moves the separable generator")
        sep = img.parts[0]
    insep = [image_of(spec.generator(nm)) for nm, _, _ in spec.insep]
    return HGElement(spec, sep, insep)


def delta_inverse(phi: HGElement) -> HigherDerivation:
    """Read the rank p^e - 1 family back off an A0 automorphism."""
    if not phi.is_in_a0:
        raise NotInA0("mod-Xb reduction is %s, not the identity" % phi.sep_auto)
    spec = phi.spec
    q = spec.p ** spec.exponent
    maps = [[[None] * spec.degree for _ in range(spec.degree)] for _ in range(q)]
    for ui, u in enumerate(spec.basis):
        img = phi.apply(from_tower(spec.monomial(u)))
        for k in range(q):
            maps[k][ui] = img.parts[k].coord_vector()
    return HigherDerivation(spec, maps)


# ------------------------------------------------------------------- generators

def canonical_generators(spec: TowerSpec) -> list:
    """Named generator family: the Galois lifts phi_<g> (one per nontrivial
    group element, acting on the separable root and fixing Xb) and the shift
    automorphisms phi_<i> with alpha_i -> alpha_i + Xb^(p^(e-n_i))."""
    gens = []
    insep_identity = [from_tower(spec.generator(nm)) for nm, _, _ in spec.insep]
    for g in spec.auto_names():
        if g == IDENTITY_AUTO:
            continue
        gens.append(("phi_" + g,
                     HGElement(spec, spec.auto_image(g), list(insep_identity))))
    sep_identity = (None if spec.sep_name is None
                    else spec.auto_image(IDENTITY_AUTO))
    for i, (nm, n, _) in enumerate(spec.insep):
        images = list(insep_identity)
        images[i] = images[i] + truncated.xbar(spec, spec.p ** (spec.exponent - n))
        gens.append(("phi_%d" % (i + 1), HGElement(spec, sep_identity, images)))
    return gens


def hg_apply(phi: HGElement, x: TruncElement) -> TruncElement:
    if phi.spec != x.spec:
        raise SpecMismatch("element from a different tower")
    return phi.apply(x)


def hg_compose(phi: HGElement, psi: HGElement) -> HGElement:
    """phi o psi, by pushing psi's generator images through phi."""
    if phi.spec != psi.spec:
        raise SpecMismatch("automorphisms over different towers")
    spec = phi.spec
    if spec.sep_name is None:
        sep = None
    else:
        img = phi.apply(from_tower(psi.image_sep))
        for part in img.parts[1:]:
            if not part.is_zero():
                raise InternalInconsistency(
                    "composite moved a separable root out of L")
        sep = img.parts[0]
    insep = [phi.apply(img) for img in psi.image_insep]
    return HGElement(spec, sep, insep)


def hg_inverse(phi: HGElement) -> HGElement:
    """Invert along the Xb-adic filtration: undo the mod-Xb part with the
    inverse Galois lift, then peel the unipotent defect one level at a time
    (each corrector strictly raises the defect's Xb-valuation)."""
    spec = phi.spec
    sep_identity = (None if spec.sep_name is None
                    else spec.auto_image(IDENTITY_AUTO))
    insep_identity = [from_tower(spec.generator(nm)) for nm, _, _ in spec.insep]
    if spec.sep_name is None or phi.sep_auto == IDENTITY_AUTO:
        inv = identity_hg(spec)
    else:
        g_inv = spec.auto_inverse[phi.sep_auto]
        inv = HGElement(spec, spec.auto_image(g_inv), list(insep_identity))
    defect = hg_compose(inv, phi)  # in A0, unipotent
    q = spec.p ** spec.exponent
    for _ in range(q + 1):
        if defect.is_identity():
            return inv
        images = []
        for img, base in zip(defect.image_insep, insep_identity):
            images.append(base - (img - base))
        corrector = HGElement(spec, sep_identity, images)
        inv = hg_compose(corrector, inv)
        defect = hg_compose(corrector, defect)
    raise InternalInconsistency("unipotent inversion did not terminate")


# ------------------------------------------------------------- fixed subspaces

def _fixed_space(spec: TowerSpec, gens, columns):
    """Kernel over K of the stacked maps x -> phi(x) - x on given columns.

    columns yields (domain basis tag, TruncElement lift); the result is the
    list of kernel vectors as coordinate lists over the domain basis.
    """
    lifts = [lift for _, lift in columns]
    ncols = len(lifts)
    rows = []
    for phi in gens:
        diff_cols = []
        for lift in lifts:
            d = phi.apply(lift) - lift
            flat = []
            for part in d.parts:
                flat.extend(part.coord_vector())
            diff_cols.append(flat)
        for r in range(len(diff_cols[0]) if diff_cols else 0):
            row = [diff_cols[c][r] for c in range(ncols)]
            if any(not e.is_zero() for e in row):
                rows.append(row)
    return linalg.kernel_basis(spec.ring, rows, ncols)


def fixed_subfield(spec: TowerSpec, gens) -> list:
    """K-basis of {a in L : phi(a) = a for all phi in gens}."""
    for phi in gens:
        if phi.spec != spec:
            raise SpecMismatch("generator over a different tower")
    if not gens:
        return [spec.monomial(u) for u in spec.basis]
    columns = [(u, from_tower(spec.monomial(u))) for u in spec.basis]
    vecs = _fixed_space(spec, gens, columns)
    return [spec.from_coords(v) for v in vecs]


def fixed_subring(spec: TowerSpec, gens) -> list:
    """K-basis of {x in L[Xb] : phi(x) = x for all phi in gens}."""
    for phi in gens:
        if phi.spec != spec:
            raise SpecMismatch("generator over a different tower")
    q = spec.p ** spec.exponent
    lifts = []
    for k in range(q):
        for u in spec.basis:
            lifts.append(((u, k), from_tower(spec.monomial(u)).shift(k)))
    if not gens:
        return [lift for _, lift in lifts]
    vecs = _fixed_space(spec, gens, lifts)
    out = []
    for v in vecs:
        parts = []
        for k in range(q):
            chunk = v[k * spec.degree:(k + 1) * spec.degree]
            parts.append(spec.from_coords(chunk))
        out.append(TruncElement(spec, parts))
    return out


# ---------------------------------------------------------------- random support

def random_hg_element(spec: TowerSpec, seed, in_a0=False) -> HGElement:
    """Deterministic-in-seed random member, via the structural parametrization."""
    rng = random.Random(seed)
    q = spec.p ** spec.exponent
    if spec.sep_name is None:
        sep = None
    else:
        name = IDENTITY_AUTO if in_a0 else rng.choice(spec.auto_names())
        sep = spec.auto_image(name)
    insep = []
    for nm, n, _ in spec.insep:
        parts = [spec.generator(nm)] + [spec.zero()] * (q - 1)
        for k in range(spec.p ** (spec.exponent - n), q):
            if rng.random() < 0.6:
                parts[k] = random_element(spec, rng, maxdeg=1)
        insep.append(TruncElement(spec, parts))
    return HGElement(spec, sep, insep)
