"""Finite normal modular extensions L/K in characteristic p.

L is presented as a tower K(alpha_0, alpha_1, ..., alpha_m) where alpha_0 is
a root of a monic separable irreducible polynomial f whose automorphism group
is supplied explicitly as root images, and each alpha_i (i >= 1) satisfies
alpha_i^(p^n_i) = a_i with a_i in K and {a_1, ..., a_m} p-independent over K.
Elements are stored as sparse coordinate maps over the monomial basis
alpha_0^j0 * alpha_1^j1 * ... with 0 <= j0 < d0 and 0 <= j_i < p^n_i.
"""

from __future__ import annotations

import itertools

from .errors import (
    AutomorphismGroupFailure,
    InputError,
    PIndependenceFailure,
    SeparabilityFailure,
    SpecMismatch,
    ZeroInverse,
)
from .fields import PolyRing, RatFunc
from . import linalg

IDENTITY_AUTO = "id"

# caps for the brute-force irreducibility scan of the separable minimal
# polynomial; beyond them the tower must be built with trust_irreducible
_IRR_MAX_CANDIDATES = 100000
_IRR_MAX_DEGREE = 4


# ---------------------------------------------------------------------------
# dense univariate arithmetic over K (coefficient lists, ascending degree)


def _uk_trim(c):
    while c and c[-1].is_zero():
        c.pop()
    return c


def _uk_add(a, b, ring):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else ring.rat_zero
        y = b[i] if i < len(b) else ring.rat_zero
        out.append(x + y)
    return _uk_trim(out)


def _uk_scale(a, c):
    if c.is_zero():
        return []
    return [x * c for x in a]


def _uk_mul(a, b, ring):
    if not a or not b:
        return []
    out = [ring.rat_zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return _uk_trim(out)


def _uk_divmod(a, b, ring):
    if not b:
        raise ZeroDivisionError("univariate division by zero polynomial")
    r = list(a)
    q = [ring.rat_zero] * max(0, len(a) - len(b) + 1)
    binv = b[-1].inverse()
    while len(r) >= len(b):
        c = r[-1] * binv
        d = len(r) - len(b)
        q[d] = c
        for i in range(len(b)):
            r[d + i] = r[d + i] - c * b[i]
        _uk_trim(r)
        if len(r) >= len(b) and r and r[-1].is_zero():
            _uk_trim(r)
    return q, r


def _uk_monic(a):
    if not a or a[-1].is_one():
        return list(a)
    inv = a[-1].inverse()
    return [x * inv for x in a]


def _uk_gcd(a, b, ring):
    a, b = list(a), list(b)
    while b:
        _, r = _uk_divmod(a, b, ring)
        a, b = b, r
    return _uk_monic(a)


def _uk_derivative(a, ring):
    out = []
    for i in range(1, len(a)):
        out.append(a[i] * i)
    return _uk_trim(out)


def _uk_mulmod(a, b, f, ring):
    prod = _uk_mul(a, b, ring)
    _, r = _uk_divmod(prod, f, ring)
    return r


def _uk_compose_mod(outer, inner, f, ring):
    """outer(inner) reduced mod the monic polynomial f."""
    acc = []
    for c in reversed(outer):
        acc = _uk_mulmod(acc, inner, f, ring)
        acc = _uk_add(acc, [c], ring)
    return acc


# ---------------------------------------------------------------------------
# decomposition of K over K^p


def kp_decompose(ring: PolyRing, x: RatFunc) -> dict:
    """Write x = sum over eps of (c_eps)^p * t^eps; return {eps: c_eps}.

    eps ranges over exponent tuples in {0..p-1}^r, the monomial basis of K
    over the subfield K^p.  For x = n/d the expansion uses x = n*d^(p-1)/d^p,
    so every component carries denominator d.
    """
    p = ring.p
    r = len(ring.variables)
    den = x.den
    u = x.num * den ** (p - 1)
    parts = {}
    for key, coeff in u.terms.items():
        exps = ring.unpack(key)
        eps = tuple(e % p for e in exps)
        q = tuple(e // p for e in exps)
        bucket = parts.setdefault(eps, {})
        bucket[q] = (bucket.get(q, 0) + coeff) % p
    out = {}
    for eps in itertools.product(range(p), repeat=r):
        bucket = parts.get(eps)
        if not bucket:
            out[eps] = ring.rat_zero
        else:
            num = ring.poly((k, c) for k, c in bucket.items() if c)
            out[eps] = ring.rat(num, den)
    return out


class TowerSpec:
    """Validated description of the tower; builds and caches its arithmetic.

    Use validate_tower() to construct one; the constructor itself runs all
    the checks unless validate=False (internal use on subtowers).
    """

    def __init__(self, ring, sep_name, minpoly, autos, insep,
                 trust_irreducible=False, validate=True):
        self.ring = ring
        self.p = ring.p
        if minpoly is None:
            sep_name = None
            minpoly = [ring.rat_zero, ring.rat_one]
            if autos:
                raise AutomorphismGroupFailure(
                    "automorphisms supplied without a separable part")
            autos = {}
        self.sep_name = sep_name
        self.minpoly = _uk_trim(list(minpoly))
        self.insep = list(insep)
        self.d0 = len(self.minpoly) - 1
        if self.d0 < 1:
            raise SeparabilityFailure("separable minimal polynomial is constant")
        if self.d0 == 1:
            # a degree-1 separable part is K itself; drop the generator name
            self.sep_name = None
            sep_name = None
        if not self.minpoly[-1].is_one():
            raise SeparabilityFailure("separable minimal polynomial must be monic")
        if self.d0 > 1 and sep_name is None:
            raise InputError("separable part of degree > 1 needs a generator name")
        names = [nm for nm, _, _ in self.insep]
        if sep_name is not None:
            names.append(sep_name)
        reserved = set(ring.variables) | {"X", IDENTITY_AUTO}
        if len(set(names)) != len(names) or reserved & set(names):
            raise InputError("generator names must be distinct and not clash "
                             "with base variables, 'X' or 'id'")
        for nm, n, a in self.insep:
            if n < 1:
                raise InputError("inseparable exponent must be at least 1: %s" % nm)
            if a.is_zero():
                raise PIndependenceFailure(
                    names.index(nm) + 1, "defining constant of %s is zero" % nm)
        self.exponent = max((n for _, n, _ in self.insep), default=0)
        self.insep_orders = [self.p ** n for _, n, _ in self.insep]
        self.degree = self.d0
        for q in self.insep_orders:
            self.degree *= q

        self.basis = list(itertools.product(
            range(self.d0), *[range(q) for q in self.insep_orders]))
        self.basis_index = {u: i for i, u in enumerate(self.basis)}

        self._sep_rows = self._build_sep_rows()
        self._auto_images = {}
        self._auto_matrices = {}
        self._mono_cache = {}
        self._a_powers = [{0: ring.rat_one} for _ in self.insep]

        if validate:
            self._validate_sep(trust_irreducible)
        self._install_autos(autos, validate)
        if validate:
            self._validate_p_independence()

    # -- construction helpers ------------------------------------------------

    def _build_sep_rows(self):
        ring = self.ring
        d0 = self.d0
        rows = []
        for k in range(d0):
            row = [ring.rat_zero] * d0
            row[k] = ring.rat_one
            rows.append(row)
        # alpha0^d0 = -(low-order part of f), then multiply up by alpha0
        for k in range(d0, 2 * d0 - 1):
            prev = rows[-1]
            row = [ring.rat_zero] + prev[: d0 - 1]
            lead = prev[d0 - 1]
            if not lead.is_zero():
                for s in range(d0):
                    row[s] = row[s] - lead * self.minpoly[s]
            rows.append(row)
        return rows

    def _validate_sep(self, trust_irreducible):
        ring = self.ring
        f = self.minpoly
        if self.d0 == 1:
            return
        fp = _uk_derivative(f, ring)
        g = _uk_gcd(f, fp, ring)
        if len(g) != 1:
            raise SeparabilityFailure(
                "separable minimal polynomial has a repeated root")
        if not trust_irreducible:
            self._check_irreducible()

    def _check_irreducible(self):
        ring = self.ring
        f = self.minpoly
        d0 = self.d0
        if d0 > _IRR_MAX_DEGREE:
            raise SeparabilityFailure(
                "irreducibility check supports degree <= %d; "
                "re-run trusting irreducibility" % _IRR_MAX_DEGREE)
        if any(not c.is_polynomial() for c in f):
            raise SeparabilityFailure(
                "irreducibility check needs polynomial coefficients; "
                "re-run trusting irreducibility")
        # monic factors of a monic polynomial over F_p[t..] stay polynomial,
        # with coefficient degree at most d0 * (max coefficient degree of f)
        maxdeg = max((c.num.total_degree() for c in f), default=0)
        bound = d0 * maxdeg
        nvars = len(ring.variables)
        monos = [exps for exps in
                 itertools.product(range(bound + 1), repeat=nvars)
                 if sum(exps) <= bound]
        n_assign = self.p ** len(monos)
        total = sum(n_assign ** k for k in range(1, d0 // 2 + 1))
        if total > _IRR_MAX_CANDIDATES:
            raise SeparabilityFailure(
                "irreducibility scan too large; re-run trusting "
                "irreducibility")
        small = [ring.poly(list(zip(monos, coeffs)))
                 for coeffs in itertools.product(range(self.p),
                                                 repeat=len(monos))]
        for k in range(1, d0 // 2 + 1):
            for lower in itertools.product(small, repeat=k):
                cand = [ring.rat(c) for c in lower] + [ring.rat_one]
                _, r = _uk_divmod(f, cand, ring)
                if not r:
                    raise SeparabilityFailure(
                        "separable minimal polynomial is reducible")

    def _install_autos(self, autos, validate):
        ring = self.ring
        f = self.minpoly
        d0 = self.d0
        images = {IDENTITY_AUTO: _uk_trim(
            [ring.rat_zero, ring.rat_one] if d0 > 1 else [ring.rat_zero])}
        if d0 == 1:
            images[IDENTITY_AUTO] = []
        for name, img in autos.items():
            if name == IDENTITY_AUTO:
                continue
            _, img = _uk_divmod(list(img), f, ring) if len(img) > d0 else (None, _uk_trim(list(img)))
            images[name] = img
        if validate:
            if len(images) != d0:
                raise AutomorphismGroupFailure(
                    "expected %d automorphisms including the identity, got %d"
                    % (d0, len(images)))
            seen = []
            for name, img in images.items():
                val = _uk_compose_mod(f, img, f, ring)
                if val:
                    raise AutomorphismGroupFailure(
                        "image of %s is not a root of the minimal polynomial"
                        % name)
                if img in seen:
                    raise AutomorphismGroupFailure(
                        "two automorphisms share one root image")
                seen.append(img)
        self._auto_images = images
        # Cayley table: compose[s][t] = s then-after t?  We store
        # table[(s, t)] = the automorphism equal to x -> s(t(x)).
        table = {}
        byimg = {self._img_key(img): name for name, img in images.items()}
        for s, hs in images.items():
            for t, ht in images.items():
                comp = _uk_compose_mod(ht, hs, f, self.ring)
                name = byimg.get(self._img_key(comp))
                if name is None:
                    if validate:
                        raise AutomorphismGroupFailure(
                            "automorphisms are not closed under composition")
                    continue
                table[(s, t)] = name
        self.auto_table = table
        self.auto_inverse = {}
        for s in images:
            for t in images:
                if table.get((s, t)) == IDENTITY_AUTO:
                    self.auto_inverse[s] = t
        if validate and len(self.auto_inverse) != len(images):
            raise AutomorphismGroupFailure("automorphism set has no inverses")

    def _img_key(self, img):
        return tuple(str(c) for c in img)

    def _validate_p_independence(self):
        ring = self.ring
        p = self.p
        bases = [a for _, _, a in self.insep]
        for i in range(len(bases)):
            # is a_i in K^p(a_1 .. a_{i-1}) = K^p-span of products a^e ?
            products = [ring.rat_one]
            for j in range(i):
                products = [q * bases[j] ** e for q in products for e in range(p)]
            cols = []
            for q in products:
                cols.append(_kp_vector(ring, q))
            target = _kp_vector(ring, bases[i])
            rows = [[cols[j][k] for j in range(len(cols))]
                    for k in range(len(target))]
            sol = linalg.solve(ring, rows, target, len(cols))
            if sol is not None:
                raise PIndependenceFailure(
                    i + 1,
                    "defining constant %d lies in K^p(earlier constants)"
                    % (i + 1))

    # -- basic builders ------------------------------------------------------

    def zero(self):
        return TowerElement(self, {})

    def one(self):
        return self.scalar(self.ring.rat_one)

    def scalar(self, c):
        if isinstance(c, int):
            c = self.ring.rat(c)
        if c.is_zero():
            return TowerElement(self, {})
        return TowerElement(self, {self.basis[0]: c})

    def generator(self, name):
        if name == self.sep_name:
            u = [0] * (len(self.insep) + 1)
            u[0] = 1
            return TowerElement(self, {tuple(u): self.ring.rat_one})
        for i, (nm, _, _) in enumerate(self.insep):
            if nm == name:
                u = [0] * (len(self.insep) + 1)
                u[i + 1] = 1
                return TowerElement(self, {tuple(u): self.ring.rat_one})
        raise InputError("unknown generator: %s" % name)

    def monomial(self, u, coeff=None):
        if coeff is None:
            coeff = self.ring.rat_one
        if coeff.is_zero():
            return TowerElement(self, {})
        return TowerElement(self, {tuple(u): coeff})

    def from_coords(self, vec):
        coords = {}
        for u, c in zip(self.basis, vec):
            if not c.is_zero():
                coords[u] = c
        return TowerElement(self, coords)

    def generator_names(self):
        names = [] if self.sep_name is None else [self.sep_name]
        names.extend(nm for nm, _, _ in self.insep)
        return names

    def auto_names(self):
        return sorted(self._auto_images)

    def auto_image(self, name):
        """Image of the separable generator under the named automorphism."""
        if name not in self._auto_images:
            from .errors import UnknownAutomorphism
            raise UnknownAutomorphism("unknown automorphism: %s" % name)
        return self.from_coords(self._sep_image_vector(name))

    def _sep_image_vector(self, name):
        img = self._auto_images[name]
        vec = [self.ring.rat_zero] * self.degree
        for s, c in enumerate(img):
            u = [0] * (len(self.insep) + 1)
            u[0] = s
            vec[self.basis_index[tuple(u)]] = c
        if not img:
            # degree-1 separable part: alpha0 = the unique root = -f[0]
            vec[0] = -self.minpoly[0]
        return vec

    def auto_of_root(self, elt):
        """Name of the automorphism whose root image equals elt, or None."""
        for name in self._auto_images:
            if self.auto_image(name) == elt:
                return name
        return None

    def compose_autos(self, s, t):
        from .errors import UnknownAutomorphism
        try:
            return self.auto_table[(s, t)]
        except KeyError:
            raise UnknownAutomorphism("unknown automorphism pair: %s, %s" % (s, t))

    # -- monomial arithmetic -------------------------------------------------

    def _a_power(self, i, k):
        cache = self._a_powers[i]
        if k not in cache:
            base = self.insep[i][2]
            cache[k] = base ** k
        return cache[k]

    def monomial_product(self, u, w):
        """m_u * m_w as a list of (basis tuple, coefficient)."""
        key = (u, w) if u <= w else (w, u)
        hit = self._mono_cache.get(key)
        if hit is not None:
            return hit
        ring = self.ring
        coeff = ring.rat_one
        red = [0] * (len(self.insep) + 1)
        for i in range(1, len(u)):
            s = u[i] + w[i]
            q = self.insep_orders[i - 1]
            if s >= q:
                coeff = coeff * self._a_power(i - 1, 1)
                s -= q
            red[i] = s
        out = []
        s0 = u[0] + w[0]
        row = self._sep_rows[s0]
        for j0 in range(self.d0):
            c = row[j0]
            if c.is_zero():
                continue
            mono = tuple([j0] + red[1:])
            out.append((mono, coeff * c))
        self._mono_cache[key] = out
        return out

    def auto_matrix(self, name):
        """Columns: coordinates of auto(basis monomial)."""
        mat = self._auto_matrices.get(name)
        if mat is not None:
            return mat
        img = self.auto_image(name)
        cols = []
        powers = [self.one()]
        for _ in range(1, self.d0):
            powers.append(powers[-1] * img)
        for u in self.basis:
            base = powers[u[0]]
            mono = self.monomial(tuple([0] + list(u[1:])))
            cols.append((base * mono).coord_vector())
        self._auto_matrices[name] = cols
        return cols

    # -- identity ------------------------------------------------------------

    def _defining_data(self):
        return (
            self.p,
            self.ring.variables,
            self.sep_name,
            tuple(str(c) for c in self.minpoly),
            tuple(sorted((n, tuple(str(c) for c in img))
                         for n, img in self._auto_images.items())),
            tuple((nm, n, str(a)) for nm, n, a in self.insep),
        )

    def __eq__(self, other):
        if self is other:
            return True
        if isinstance(other, TowerSpec):
            return self._defining_data() == other._defining_data()
        return NotImplemented

    def __hash__(self):
        return hash(self._defining_data())

    def __repr__(self):
        gens = ", ".join(self.generator_names())
        return "TowerSpec(p=%d, gens=[%s], degree=%d, exponent=%d)" % (
            self.p, gens, self.degree, self.exponent)


def _kp_vector(ring, x):
    """K over K^p coordinates of x as a sorted list.

    Writing an unknown K^p-coefficient as lambda^p turns K^p-linear span
    questions about such vectors into plain K-linear systems in lambda,
    because dec(lambda^p * v) = lambda * dec(v) componentwise.
    """
    dec = kp_decompose(ring, x)
    return [dec[eps] for eps in sorted(dec)]


class TowerElement:
    """Element of L in sparse monomial coordinates over K."""

    __slots__ = ("spec", "coords")

    def __init__(self, spec, coords):
        self.spec = spec
        self.coords = coords

    def _check(self, other):
        if self.spec is not other.spec and self.spec != other.spec:
            raise SpecMismatch("elements live in different towers")

    def is_zero(self):
        return not self.coords

    def is_one(self):
        return self.as_scalar() is not None and self.as_scalar().is_one()

    def in_base_field(self):
        return self.as_scalar() is not None

    def as_scalar(self):
        """The element as a RatFunc when it lies in K, else None."""
        if not self.coords:
            return self.spec.ring.rat_zero
        if len(self.coords) == 1:
            u, c = next(iter(self.coords.items()))
            if all(j == 0 for j in u):
                return c
        return None

    def coord_vector(self):
        zero = self.spec.ring.rat_zero
        return [self.coords.get(u, zero) for u in self.spec.basis]

    def __add__(self, other):
        if isinstance(other, (int, RatFunc)):
            other = self.spec.scalar(other)
        if not isinstance(other, TowerElement):
            return NotImplemented
        self._check(other)
        out = dict(self.coords)
        for u, c in other.coords.items():
            s = out.get(u)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(u, None)
            else:
                out[u] = s
        return TowerElement(self.spec, out)

    __radd__ = __add__

    def __neg__(self):
        return TowerElement(self.spec, {u: -c for u, c in self.coords.items()})

    def __sub__(self, other):
        if isinstance(other, (int, RatFunc)):
            other = self.spec.scalar(other)
        if not isinstance(other, TowerElement):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, RatFunc)):
            if isinstance(other, int):
                other = self.spec.ring.rat(other)
            if other.is_zero():
                return self.spec.zero()
            return TowerElement(
                self.spec, {u: c * other for u, c in self.coords.items()})
        if not isinstance(other, TowerElement):
            return NotImplemented
        self._check(other)
        out = {}
        for u, cu in self.coords.items():
            for w, cw in other.coords.items():
                c = cu * cw
                for mono, k in self.spec.monomial_product(u, w):
                    s = out.get(mono)
                    s = c * k if s is None else s + c * k
                    if s.is_zero():
                        out.pop(mono, None)
                    else:
                        out[mono] = s
        return TowerElement(self.spec, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return elt_inverse(self) ** (-n)
        acc = self.spec.one()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    def __truediv__(self, other):
        if isinstance(other, (int, RatFunc)):
            other = self.spec.scalar(other)
        if not isinstance(other, TowerElement):
            return NotImplemented
        return self * elt_inverse(other)

    def __rtruediv__(self, other):
        inv = elt_inverse(self)
        return inv * other

    def __eq__(self, other):
        if isinstance(other, (int, RatFunc)):
            s = self.as_scalar()
            return s is not None and s == other
        if isinstance(other, TowerElement):
            return self.spec == other.spec and self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted((u, str(c)) for u, c in self.coords.items())))

    def _mono_str(self, u, c):
        names = []
        if u[0]:
            names.append(self.spec.sep_name +
                         ("^%d" % u[0] if u[0] > 1 else ""))
        for i, j in enumerate(u[1:]):
            if j:
                names.append(self.spec.insep[i][0] +
                             ("^%d" % j if j > 1 else ""))
        gens = "*".join(names)
        if not gens:
            return str(c)
        if c.is_one():
            return gens
        cs = str(c)
        if len(c.num.terms) > 1 or not c.den.is_one():
            if not (cs.startswith("(") and cs.endswith(")")):
                cs = "(" + cs + ")"
        return cs + "*" + gens

    def __str__(self):
        if not self.coords:
            return "0"
        items = sorted(self.coords.items(),
                       key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)
        return " + ".join(self._mono_str(u, c) for u, c in items)

    def __repr__(self):
        return "<%s>" % self


# ---------------------------------------------------------------------------
# module-level operations


def validate_tower(ring, sep_name, minpoly, autos, insep,
                   trust_irreducible=False) -> TowerSpec:
    """Run all tower checks and return the validated TowerSpec.

    minpoly: ascending RatFunc coefficients of the monic separable minimal
    polynomial (None for no separable part).  autos: {name: image of the
    separable generator as ascending coefficient list}; the identity is
    implied.  insep: [(name, n_i, a_i)] with a_i in K.
    """
    return TowerSpec(ring, sep_name, minpoly, autos, insep,
                     trust_irreducible=trust_irreducible, validate=True)


def elt_mul(x: TowerElement, y: TowerElement) -> TowerElement:
    return x * y


def elt_inverse(x: TowerElement) -> TowerElement:
    """Multiplicative inverse in L via the multiplication matrix."""
    if x.is_zero():
        raise ZeroInverse("zero has no inverse in the tower")
    s = x.as_scalar()
    if s is not None:
        return x.spec.scalar(s.inverse())
    spec = x.spec
    cols = []
    for u in spec.basis:
        cols.append((x * spec.monomial(u)).coord_vector())
    rows = [[cols[j][i] for j in range(spec.degree)]
            for i in range(spec.degree)]
    rhs = spec.one().coord_vector()
    sol = linalg.solve(spec.ring, rows, rhs, spec.degree)
    if sol is None:
        from .errors import InternalInconsistency
        raise InternalInconsistency(
            "multiplication matrix is singular; tower is not a field")
    return spec.from_coords(sol)


def apply_sep_auto(x: TowerElement, name: str) -> TowerElement:
    """Apply the named automorphism of the separable part to x.

    It fixes K and every inseparable generator and sends the separable
    generator to its named root image.
    """
    spec = x.spec
    cols = spec.auto_matrix(name)
    out = spec.zero()
    for u, c in x.coords.items():
        col = cols[spec.basis_index[u]]
        out = out + spec.from_coords([c * v for v in col])
    return out


def tower_pth_root(x: TowerElement):
    """y with y^p = x, or None when x has no p-th root in L.

    Writing y = sum_u lambda_u m_u makes x = sum_u lambda_u^p m_u^p; taking
    the K over K^p decomposition of every coordinate turns that into a
    K-linear system for the lambda_u.
    """
    spec = x.spec
    ring = spec.ring
    if x.is_zero():
        return spec.zero()
    cols = []
    for u in spec.basis:
        mp = spec.monomial(u) ** spec.p
        vec = []
        for c in mp.coord_vector():
            dec = kp_decompose(ring, c)
            vec.extend(dec[eps] for eps in sorted(dec))
        cols.append(vec)
    target = []
    for c in x.coord_vector():
        dec = kp_decompose(ring, c)
        target.extend(dec[eps] for eps in sorted(dec))
    rows = [[cols[j][i] for j in range(spec.degree)]
            for i in range(len(target))]
    sol = linalg.solve(ring, rows, target, spec.degree)
    if sol is None:
        return None
    y = spec.from_coords(sol)
    if not (y ** spec.p == x):
        from .errors import InternalInconsistency
        raise InternalInconsistency("p-th root verification failed")
    return y


def flatten_row(elts) -> list:
    """K-coordinate row of a vector over L (concatenated coordinates)."""
    out = []
    for e in elts:
        out.extend(e.coord_vector())
    return out


def random_element(spec: TowerSpec, rng, maxdeg=1, scalar_den=False) -> TowerElement:
    """Random element with small polynomial coordinates (tests, sampling)."""
    ring = spec.ring
    coords = {}
    for u in spec.basis:
        if rng.random() < 0.45:
            continue
        num = ring.zero
        for _ in range(rng.randrange(1, 3)):
            exps = [rng.randrange(0, maxdeg + 1) for _ in ring.variables]
            num = num + ring.poly([(tuple(exps), rng.randrange(1, spec.p))])
        if num.is_zero():
            continue
        coords[u] = ring.rat(num)
    elt = TowerElement(spec, coords)
    if scalar_den:
        den = ring.variable(0) + ring.const(1)
        elt = elt * ring.rat(ring.one, den)
    return elt
