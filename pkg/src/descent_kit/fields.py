"""Exact arithmetic over K = F_p(t_1, ..., t_r).

MultiPoly is a sparse multivariate polynomial over F_p with packed monomial
keys (see _fppy for the encoding; integer order on keys = graded-lex order on
monomials).  RatFunc is a reduced fraction of MultiPolys with monic
denominator, so equality is dict equality and every element has one
representation.

Values are immutable: no operation mutates a term dict that a MultiPoly owns.
That makes all types in this module safe to share across threads and usable
as dict keys.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from . import kernel
from .errors import BothZero, DegreeOverflow, DivisionByZero, InvalidModulus

_PRIMES = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149,
    151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227,
    229, 233, 239, 241, 251,
}


class PrimeModulus:
    """A prime p with 2 <= p <= 251, the coefficient characteristic."""

    __slots__ = ("value",)

    def __init__(self, value: int):
        if not isinstance(value, int) or value not in _PRIMES:
            raise InvalidModulus(f"p must be a prime in 2..251, got {value!r}")
        self.value = value

    def __int__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, PrimeModulus):
            return self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash(("PrimeModulus", self.value))

    def __repr__(self):
        return f"PrimeModulus({self.value})"


class PolyRing:
    """F_p[t_1..t_r] with a fixed packed-key monomial codec.

    Rings compare equal by (p, variables); every element carries its ring and
    mixed-ring arithmetic is rejected.
    """

    def __init__(self, p, variables: Sequence[str]):
        if not isinstance(p, PrimeModulus):
            p = PrimeModulus(p)
        self.modulus = p
        self.p = p.value
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        nfields = len(self.variables) + 1
        # a 64-bit key when it fits; Python ints carry wider keys transparently
        width = 20 if nfields <= 3 else (16 if nfields <= 4 else 12)
        self.nfields = nfields
        self.width = width
        self.mask = (1 << width) - 1
        self.shifts = tuple(
            width * (nfields - 1 - i) for i in range(1, nfields)
        )
        self.degshift = width * (nfields - 1)
        self.zero = MultiPoly(self, {})
        self.one = MultiPoly(self, {0: 1})
        self.rat_zero = RatFunc(self, self.zero, self.one, _normalized=True)
        self.rat_one = RatFunc(self, self.one, self.one, _normalized=True)

    # ---------------------------------------------------------------- codec

    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != len(self.variables):
            raise ValueError("exponent tuple has wrong length")
        total = 0
        key = 0
        for e, s in zip(exps, self.shifts):
            if e < 0 or e > self.mask:
                raise DegreeOverflow(f"exponent {e} out of range")
            total += e
            key |= e << s
        if total > self.mask:
            raise DegreeOverflow(f"total degree {total} out of range")
        return key | (total << self.degshift)

    def unpack(self, key: int) -> tuple:
        return tuple((key >> s) & self.mask for s in self.shifts)

    def key_degree(self, key: int) -> int:
        return key >> self.degshift

    # ------------------------------------------------------------- builders

    def const(self, c: int) -> MultiPoly:
        c %= self.p
        return MultiPoly(self, {0: c} if c else {})

    def variable(self, which) -> MultiPoly:
        if isinstance(which, str):
            which = self.variables.index(which)
        exps = [0] * len(self.variables)
        exps[which] = 1
        return MultiPoly(self, {self.pack(exps): 1})

    def poly(self, entries: Iterable) -> MultiPoly:
        """Build from an iterable of (exponent tuple, coefficient)."""
        terms = {}
        for exps, c in entries:
            c %= self.p
            key = self.pack(tuple(exps))
            c = (terms.get(key, 0) + c) % self.p
            if c:
                terms[key] = c
            else:
                terms.pop(key, None)
        return MultiPoly(self, terms)

    def rat(self, num, den=None) -> RatFunc:
        if isinstance(num, int):
            num = self.const(num)
        if den is None:
            den = self.one
        elif isinstance(den, int):
            den = self.const(den)
        return RatFunc(self, num, den)

    def __eq__(self, other):
        if isinstance(other, PolyRing):
            return self.p == other.p and self.variables == other.variables
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.variables))

    def __repr__(self):
        return f"PolyRing(p={self.p}, vars={self.variables})"


class MultiPoly:
    """Sparse polynomial; terms maps packed key -> coefficient in 1..p-1."""

    __slots__ = ("ring", "terms", "_lead")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._lead = max(terms) if terms else -1

    # ------------------------------------------------------------ predicates

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {0: 1}

    def is_constant(self) -> bool:
        return self._lead <= 0

    @property
    def lead_key(self) -> int:
        return self._lead

    @property
    def lead_coeff(self) -> int:
        return self.terms[self._lead] if self.terms else 0

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return self.ring.key_degree(self._lead)

    def degree_in(self, var: int) -> int:
        if not self.terms:
            return -1
        s = self.ring.shifts[var]
        m = self.ring.mask
        return max((k >> s) & m for k in self.terms)

    def active_vars(self) -> set:
        out = set()
        shifts = self.ring.shifts
        m = self.ring.mask
        for k in self.terms:
            for i, s in enumerate(shifts):
                if (k >> s) & m:
                    out.add(i)
        return out

    # ------------------------------------------------------------ arithmetic

    def _check(self, other):
        if self.ring != other.ring:
            raise ValueError("mixed polynomial rings")

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        return MultiPoly(self.ring, kernel.mp_add(self.terms, other.terms, self.ring.p))

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        return MultiPoly(self.ring, kernel.mp_sub(self.terms, other.terms, self.ring.p))

    def __neg__(self):
        return MultiPoly(self.ring, kernel.mp_neg(self.terms, self.ring.p))

    def __mul__(self, other):
        if isinstance(other, int):
            return MultiPoly(self.ring, kernel.mp_scale(self.terms, other, self.ring.p))
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        if self.terms and other.terms:
            dsum = self.ring.key_degree(self._lead) + self.ring.key_degree(other._lead)
            if dsum > self.ring.mask:
                raise DegreeOverflow(f"product degree {dsum} exceeds ring capacity")
        return MultiPoly(self.ring, kernel.mp_mul(self.terms, other.terms, self.ring.p))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent on a polynomial")
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base_needed = e > 1
            e >>= 1
            if base_needed and e:
                base = base * base
        return result

    def divexact(self, other: MultiPoly):
        """Exact quotient, or None when other does not divide self."""
        self._check(other)
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        q = kernel.mp_divexact(
            self.terms, other.terms, self.ring.p, self.ring.width, self.ring.nfields
        )
        return None if q is None else MultiPoly(self.ring, q)

    def monic(self) -> MultiPoly:
        """Scale so the graded-lex leading coefficient is 1."""
        if not self.terms:
            return self
        lc = self.terms[self._lead]
        if lc == 1:
            return self
        inv = pow(lc, self.ring.p - 2, self.ring.p)
        return MultiPoly(self.ring, kernel.mp_scale(self.terms, inv, self.ring.p))

    # -------------------------------------------------------------- protocol

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.p, self.ring.variables, tuple(sorted(self.terms.items()))))

    def sorted_terms(self):
        """(exponent tuple, coeff) pairs in descending graded-lex order."""
        ring = self.ring
        return [(ring.unpack(k), self.terms[k]) for k in sorted(self.terms, reverse=True)]

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.variables
        parts = []
        for exps, c in self.sorted_terms():
            factors = []
            if c != 1 or not any(exps):
                factors.append(str(c))
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"MultiPoly({self})"


# --------------------------------------------------------------------- gcd

def _to_dense(f: MultiPoly, var: int) -> list:
    s = f.ring.shifts[var]
    m = f.ring.mask
    if not f.terms:
        return []
    out = [0] * (f.degree_in(var) + 1)
    for k, c in f.terms.items():
        out[(k >> s) & m] = c
    return out


def _from_dense(ring: PolyRing, coeffs: list, var: int) -> MultiPoly:
    nvars = len(ring.variables)
    terms = {}
    for e, c in enumerate(coeffs):
        if c:
            exps = [0] * nvars
            exps[var] = e
            terms[ring.pack(exps)] = c
    return MultiPoly(ring, terms)


def _split_by_var(f: MultiPoly, var: int) -> dict:
    """Map x_var-degree -> coefficient polynomial (with x_var stripped)."""
    ring = f.ring
    s = ring.shifts[var]
    m = ring.mask
    ds = ring.degshift
    out: dict = {}
    for k, c in f.terms.items():
        e = (k >> s) & m
        base = k - (e << s) - (e << ds)
        out.setdefault(e, {})[base] = c
    return {e: MultiPoly(ring, t) for e, t in out.items()}


def _join_by_var(ring: PolyRing, coeffs: dict, var: int) -> MultiPoly:
    s = ring.shifts[var]
    ds = ring.degshift
    terms = {}
    for e, poly in coeffs.items():
        off = (e << s) + (e << ds)
        for k, c in poly.terms.items():
            terms[k + off] = c
    return MultiPoly(ring, terms)


def _gcd_univar(f: MultiPoly, g: MultiPoly, var: int) -> MultiPoly:
    p = f.ring.p
    return _from_dense(
        f.ring, kernel.uni_gcd(_to_dense(f, var), _to_dense(g, var), p), var
    )


def _to_grid(f: MultiPoly, vo: int, vi: int) -> list:
    ring = f.ring
    so, si = ring.shifts[vo], ring.shifts[vi]
    m = ring.mask
    grid: list = [[] for _ in range(f.degree_in(vo) + 1)]
    for k, c in f.terms.items():
        eo = (k >> so) & m
        ei = (k >> si) & m
        row = grid[eo]
        if len(row) <= ei:
            row.extend([0] * (ei + 1 - len(row)))
        row[ei] = c
    return grid


def _from_grid(ring: PolyRing, grid: list, vo: int, vi: int) -> MultiPoly:
    nvars = len(ring.variables)
    terms = {}
    for eo, row in enumerate(grid):
        for ei, c in enumerate(row):
            if c:
                exps = [0] * nvars
                exps[vo] = eo
                exps[vi] = ei
                terms[ring.pack(exps)] = c
    return MultiPoly(ring, terms)


def _content(coeffs: dict) -> MultiPoly:
    acc = None
    for e in sorted(coeffs):
        c = coeffs[e]
        acc = c if acc is None else _gcd_rec(acc, c)
        if acc.is_constant():
            break
    return acc.monic()


def _prem(f: MultiPoly, g: MultiPoly, var: int) -> MultiPoly:
    """Standard pseudo-remainder: lc(g)^(deg f - deg g + 1) * f mod g."""
    ring = f.ring
    s = ring.shifts[var]
    ds = ring.degshift
    gc = _split_by_var(g, var)
    dg = max(gc)
    lg = gc[dg]
    # normalization exponent: early coefficient cancellations skip a factor
    # of lc(g), which must be restored for subresultant divisibility
    e = f.degree_in(var) - dg + 1
    r = f
    while not r.is_zero():
        rc = _split_by_var(r, var)
        dr = max(rc)
        if dr < dg:
            break
        lr = rc[dr]
        shift_key = ((dr - dg) << s) + ((dr - dg) << ds)
        shifted = MultiPoly(ring, {k + shift_key: c for k, c in g.terms.items()})
        r = lg * r - lr * shifted
        e -= 1
    if e > 0 and not r.is_zero():
        r = r * lg ** e
    return r


def _gcd_rec(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """gcd up to a scalar; f, g nonzero.  Subresultant PRS on the main
    variable: pseudo-remainders shrink by exact divisions with the Brown
    g/h factors, so no content gcds happen inside the loop."""
    ring = f.ring
    av = f.active_vars() | g.active_vars()
    if not av:
        return ring.one
    if len(av) == 1:
        return _gcd_univar(f, g, next(iter(av)))
    if len(av) == 2:
        vi, vo = sorted(av)
        grid = kernel.bi_gcd(_to_grid(f, vo, vi), _to_grid(g, vo, vi), ring.p)
        return _from_grid(ring, grid, vo, vi)
    var = max(av)
    fc = _split_by_var(f, var)
    gc = _split_by_var(g, var)
    if max(fc) == 0:
        return _gcd_rec(f, _content(gc))
    if max(gc) == 0:
        return _gcd_rec(_content(fc), g)
    cf = _content(fc)
    cg = _content(gc)
    c = _gcd_rec(cf, cg)
    fp = f.divexact(cf)
    gp = g.divexact(cg)
    if fp.degree_in(var) < gp.degree_in(var):
        fp, gp = gp, fp
    gfac = ring.one
    hfac = ring.one
    while True:
        dg = gp.degree_in(var)
        if dg == 0:
            # a primitive polynomial of degree 0 in var is a unit here
            return c
        delta = fp.degree_in(var) - dg
        r = _prem(fp, gp, var)
        if r.is_zero():
            rc = _split_by_var(gp, var)
            return c * gp.divexact(_content(rc))
        divisor = gfac * hfac ** delta
        fp, gp = gp, (r if divisor.is_one() else r.divexact(divisor))
        gfac = _split_by_var(fp, var)[fp.degree_in(var)]
        if delta == 1:
            hfac = gfac
        elif delta > 1:
            hfac = (gfac ** delta).divexact(hfac ** (delta - 1))


def poly_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Monic gcd in F_p[t_1..t_r] via content/primitive-part recursion."""
    if f.ring != g.ring:
        raise ValueError("mixed polynomial rings")
    if f.is_zero() and g.is_zero():
        raise BothZero("gcd(0, 0) is undefined")
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    return _gcd_rec(f, g).monic()


# ----------------------------------------------------------------- fractions

class RatFunc:
    """Element of K = F_p(t_1..t_r): reduced num/den, den monic, 0 = 0/1."""

    __slots__ = ("ring", "num", "den")

    def __init__(self, ring: PolyRing, num: MultiPoly, den: MultiPoly, _normalized=False):
        if _normalized:
            self.ring = ring
            self.num = num
            self.den = den
            return
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            den = ring.one
        elif not den.is_one():
            g = poly_gcd(num, den)
            if not g.is_one():
                num = num.divexact(g)
                den = den.divexact(g)
            lc = den.lead_coeff
            if lc != 1:
                inv = pow(lc, ring.p - 2, ring.p)
                num = num * inv
                den = den * inv
        self.ring = ring
        self.num = num
        self.den = den

    # ------------------------------------------------------------ predicates

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    # ------------------------------------------------------------ arithmetic

    def _check(self, other):
        if self.ring != other.ring:
            raise ValueError("mixed coefficient fields")

    def _addsub(self, other, sign):
        """Henrici addition: cross-cancel through gcd(d1, d2) so the gcd
        work happens on denominators, not on the blown-up numerator."""
        ring = self.ring
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if d1 is d2 or d1 == d2:
            t = n1 + n2 if sign > 0 else n1 - n2
            if t.is_zero():
                return ring.rat_zero
            if d1.is_one():
                return RatFunc(ring, t, d1, _normalized=True)
            g = poly_gcd(t, d1)
            if g.is_one():
                return RatFunc(ring, t, d1, _normalized=True)
            return RatFunc(ring, t.divexact(g), d1.divexact(g), _normalized=True)
        if d1.is_one() or d2.is_one():
            g = ring.one
        else:
            g = poly_gcd(d1, d2)
        if g.is_one():
            t = n1 * d2 + n2 * d1 if sign > 0 else n1 * d2 - n2 * d1
            if t.is_zero():
                return ring.rat_zero
            return RatFunc(ring, t, d1 * d2, _normalized=True)
        dd1 = d1.divexact(g)
        dd2 = d2.divexact(g)
        t = n1 * dd2 + n2 * dd1 if sign > 0 else n1 * dd2 - n2 * dd1
        if t.is_zero():
            return ring.rat_zero
        u = poly_gcd(t, g)
        if u.is_one():
            return RatFunc(ring, t, dd1 * dd2 * g, _normalized=True)
        return RatFunc(ring, t.divexact(u),
                       dd1 * dd2 * g.divexact(u), _normalized=True)

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.rat(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        self._check(other)
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        return self._addsub(other, +1)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.rat(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        self._check(other)
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return -other
        return self._addsub(other, -1)

    def __rsub__(self, other):
        if isinstance(other, int):
            return self.ring.rat(other) - self
        return NotImplemented

    def __neg__(self):
        return RatFunc(self.ring, -self.num, self.den, _normalized=True)

    def __mul__(self, other):
        if isinstance(other, int):
            n = self.num * other
            if n.is_zero():
                return self.ring.rat_zero
            return RatFunc(self.ring, n, self.den, _normalized=True)
        if not isinstance(other, RatFunc):
            return NotImplemented
        self._check(other)
        if self.num.is_zero() or other.num.is_zero():
            return self.ring.rat_zero
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        # both operands reduced: cancel n1 against d2 and n2 against d1,
        # after which the product is reduced by construction
        if not d2.is_one():
            g1 = poly_gcd(n1, d2)
            if not g1.is_one():
                n1 = n1.divexact(g1)
                d2 = d2.divexact(g1)
        if not d1.is_one():
            g2 = poly_gcd(n2, d1)
            if not g2.is_one():
                n2 = n2.divexact(g2)
                d1 = d1.divexact(g2)
        return RatFunc(self.ring, n1 * n2, d1 * d2, _normalized=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.ring.rat(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        self._check(other)
        if other.is_zero():
            raise DivisionByZero("division by zero in K")
        return self * other.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, int):
            return self.ring.rat(other) / self
        return NotImplemented

    def inverse(self) -> RatFunc:
        if self.is_zero():
            raise DivisionByZero("inverse of zero in K")
        num, den = self.den, self.num
        lc = den.lead_coeff
        if lc != 1:
            inv = pow(lc, self.ring.p - 2, self.ring.p)
            num = num * inv
            den = den * inv
        return RatFunc(self.ring, num, den, _normalized=True)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.ring, self.num**e, self.den**e)

    # -------------------------------------------------------------- protocol

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return (
                self.ring == other.ring
                and self.num == other.num
                and self.den == other.den
            )
        if isinstance(other, int):
            return self == self.ring.rat(other)
        return NotImplemented

    def __hash__(self):
        return hash((hash(self.num), hash(self.den)))

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        ns = str(self.num)
        if len(self.num.terms) > 1:
            ns = f"({ns})"
        ds = str(self.den)
        if not _atomic_poly_str(self.den):
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self):
        return f"RatFunc({self})"


def _atomic_poly_str(f: MultiPoly) -> bool:
    """True when str(f) is safe as the right operand of '/' without parens."""
    if len(f.terms) != 1:
        return False
    ((exps, c),) = f.sorted_terms()
    nz = [e for e in exps if e]
    if not nz:
        return True  # bare constant
    return c == 1 and len(nz) == 1  # single variable power


# -------------------------------------------------------------- module ops

def ratfunc_arith(op: str, x: RatFunc, y=None) -> RatFunc:
    """Functional surface over the dunder arithmetic."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "neg":
        return -x
    if op == "pow":
        if not isinstance(y, int) or y < 0:
            raise ValueError("pow exponent must be a natural number")
        return x**y
    raise ValueError(f"unknown op {op!r}")


def poly_pth_root(f: MultiPoly):
    """p-th root in F_p[t..], or None; exact: Frobenius image = exponents in pZ."""
    ring = f.ring
    p = ring.p
    terms = {}
    for k, c in f.terms.items():
        exps = ring.unpack(k)
        if any(e % p for e in exps):
            return None
        terms[ring.pack(tuple(e // p for e in exps))] = c
    return MultiPoly(ring, terms)


def pth_root(x: RatFunc):
    """p-th root in K, or None when x is not a p-th power.

    In lowest terms x = u^p/v^p forces both parts to be p-th powers, and
    F_p-coefficients are fixed by Frobenius, so only exponents move.
    """
    if x.is_zero():
        return x
    rn = poly_pth_root(x.num)
    if rn is None:
        return None
    rd = poly_pth_root(x.den)
    if rd is None:
        return None
    return RatFunc(x.ring, rn, rd, _normalized=True)
