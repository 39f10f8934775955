"""Multivariate polynomials over the tower field L and Groebner bases.

Polynomials are sparse dicts from exponent tuples to TowerElement
coefficients, ordered by graded lexicographic order.  The Buchberger loop
uses the normal pair-selection strategy, discards pairs with coprime leading
monomials, and interreduces at the end, so the returned basis is the reduced
monic Groebner basis and therefore unique for the ideal and order.  Ideals
here are desk-scale (a handful of generators in two or three variables), so
no further pair criteria are needed.
"""

from .errors import InputError, SpecMismatch
from .tower import TowerElement, TowerSpec, elt_inverse


def _mono_key(e):
    return (sum(e), e)


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mono_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class PolyL:
    """Polynomial in the given variables with coefficients in L."""

    __slots__ = ("spec", "names", "coords")

    def __init__(self, spec: TowerSpec, names, coords):
        self.spec = spec
        self.names = tuple(names)
        clean = {}
        for e, c in coords.items():
            e = tuple(e)
            if len(e) != len(self.names):
                raise InputError("exponent %r does not match %d variables"
                                 % (e, len(self.names)))
            if any(j < 0 for j in e):
                raise InputError("negative exponent in %r" % (e,))
            if not c.is_zero():
                clean[e] = c
        self.coords = clean

    def _check(self, other):
        if self.spec != other.spec or self.names != other.names:
            raise SpecMismatch("polynomials from different rings")

    def is_zero(self) -> bool:
        return not self.coords

    def lead_monomial(self):
        return max(self.coords, key=_mono_key)

    def lead_coeff(self) -> TowerElement:
        return self.coords[self.lead_monomial()]

    def total_degree(self) -> int:
        if not self.coords:
            return -1
        return max(sum(e) for e in self.coords)

    def coefficients(self):
        return list(self.coords.values())

    def __add__(self, other):
        if not isinstance(other, PolyL):
            return NotImplemented
        self._check(other)
        out = dict(self.coords)
        for e, c in other.coords.items():
            s = out.get(e)
            out[e] = c if s is None else s + c
        return PolyL(self.spec, self.names, out)

    def __neg__(self):
        return PolyL(self.spec, self.names,
                     {e: -c for e, c in self.coords.items()})

    def __sub__(self, other):
        if not isinstance(other, PolyL):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, TowerElement)):
            if isinstance(other, int):
                other = self.spec.one() * other
            return PolyL(self.spec, self.names,
                         {e: c * other for e, c in self.coords.items()})
        if not isinstance(other, PolyL):
            return NotImplemented
        self._check(other)
        out = {}
        for e1, c1 in self.coords.items():
            for e2, c2 in other.coords.items():
                e = _mono_mul(e1, e2)
                c = c1 * c2
                s = out.get(e)
                out[e] = c if s is None else s + c
        return PolyL(self.spec, self.names, out)

    __rmul__ = __mul__

    def term_mul(self, mono, coeff) -> "PolyL":
        return PolyL(self.spec, self.names,
                     {_mono_mul(e, mono): c * coeff
                      for e, c in self.coords.items()})

    def monic(self) -> "PolyL":
        if self.is_zero():
            return self
        lc = self.lead_coeff()
        if lc.is_one():
            return self
        return self * elt_inverse(lc)

    def __eq__(self, other):
        if not isinstance(other, PolyL):
            return NotImplemented
        return (self.spec == other.spec and self.names == other.names
                and self.coords == other.coords)

    def __str__(self):
        if not self.coords:
            return "0"
        parts = []
        for e in sorted(self.coords, key=_mono_key, reverse=True):
            c = self.coords[e]
            mono = "*".join(
                nm if j == 1 else "%s^%d" % (nm, j)
                for nm, j in zip(self.names, e) if j)
            cs = str(c)
            if not mono:
                parts.append("(%s)" % cs if "+" in cs else cs)
            elif cs == "1":
                parts.append(mono)
            else:
                if "+" in cs or "*" in cs or "/" in cs:
                    cs = "(" + cs + ")"
                parts.append(cs + "*" + mono)
        return " + ".join(parts)

    def __repr__(self):
        return "<poly %s>" % self


def poly_from_terms(spec, names, terms) -> PolyL:
    """Build a PolyL from (exponent tuple, coefficient) pairs."""
    out = {}
    for e, c in terms:
        e = tuple(e)
        s = out.get(e)
        out[e] = c if s is None else s + c
    return PolyL(spec, names, out)


def reduce_poly(f: PolyL, basis) -> PolyL:
    """Full remainder of f under multivariate division by the list basis."""
    rem = {}
    work = f
    while not work.is_zero():
        e = work.lead_monomial()
        c = work.coords[e]
        for g in basis:
            ge = g.lead_monomial()
            if _mono_divides(ge, e):
                q = c * elt_inverse(g.lead_coeff())
                work = work - g.term_mul(_mono_div(e, ge), q)
                break
        else:
            rem[e] = c
            work = PolyL(work.spec, work.names,
                         {m: v for m, v in work.coords.items() if m != e})
    return PolyL(f.spec, f.names, rem)


def s_polynomial(f: PolyL, g: PolyL) -> PolyL:
    ef, eg = f.lead_monomial(), g.lead_monomial()
    lcm = _mono_lcm(ef, eg)
    left = f.term_mul(_mono_div(lcm, ef), elt_inverse(f.lead_coeff()))
    right = g.term_mul(_mono_div(lcm, eg), elt_inverse(g.lead_coeff()))
    return left - right


def groebner_basis(gens) -> list:
    """The reduced monic Groebner basis of the ideal the generators span."""
    basis = [g.monic() for g in gens if not g.is_zero()]
    if not basis:
        return []
    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    while pairs:
        pairs.sort(key=lambda ij: _mono_key(_mono_lcm(
            basis[ij[0]].lead_monomial(), basis[ij[1]].lead_monomial())),
            reverse=True)
        i, j = pairs.pop()
        ei = basis[i].lead_monomial()
        ej = basis[j].lead_monomial()
        if _mono_lcm(ei, ej) == _mono_mul(ei, ej):
            continue  # coprime leading monomials: S-polynomial reduces to 0
        rem = reduce_poly(s_polynomial(basis[i], basis[j]), basis)
        if not rem.is_zero():
            basis.append(rem.monic())
            k = len(basis) - 1
            pairs.extend((k, s) for s in range(k))
    # interreduce: drop redundant leads, then fully reduce the tails
    lead_min = []
    for g in sorted(basis, key=lambda g: _mono_key(g.lead_monomial())):
        e = g.lead_monomial()
        if not any(_mono_divides(h.lead_monomial(), e) for h in lead_min):
            lead_min.append(g)
    out = []
    for i, g in enumerate(lead_min):
        others = lead_min[:i] + lead_min[i + 1:]
        rem = reduce_poly(g, others)
        if not rem.is_zero():
            out.append(rem.monic())
    out.sort(key=lambda g: _mono_key(g.lead_monomial()))
    return out


def ideal_member(f: PolyL, basis) -> bool:
    """Membership in the ideal with the given Groebner basis."""
    return reduce_poly(f, basis).is_zero()


def ideal_equal(gens_a, gens_b) -> bool:
    ga = groebner_basis(gens_a)
    gb = groebner_basis(gens_b)
    return ga == gb


class PresentedAlgebraL:
    """A quotient presentation L[x1..xq] / (generators)."""

    __slots__ = ("spec", "names", "gens")

    def __init__(self, spec: TowerSpec, names, gens):
        self.spec = spec
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise InputError("duplicate variable names")
        clean = []
        for g in gens:
            if g.spec != spec or g.names != self.names:
                raise SpecMismatch("generator from a different ring")
            if g.is_zero():
                raise InputError("ideal generators must be nonzero")
            clean.append(g)
        self.gens = clean

    def zero(self) -> PolyL:
        return PolyL(self.spec, self.names, {})

    def variable(self, name) -> PolyL:
        if name not in self.names:
            raise InputError("unknown variable %r" % name)
        e = tuple(1 if nm == name else 0 for nm in self.names)
        return PolyL(self.spec, self.names, {e: self.spec.one()})

    def constant(self, c: TowerElement) -> PolyL:
        zero_e = tuple(0 for _ in self.names)
        return PolyL(self.spec, self.names, {zero_e: c})

    def __repr__(self):
        return "PresentedAlgebraL(vars=%s, %d generators)" % (
            ", ".join(self.names), len(self.gens))
