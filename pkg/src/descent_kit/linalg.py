"""Exact linear algebra over K = F_p(t..) by fraction-free elimination.

Rows come in as RatFunc vectors, get their denominators cleared, and all
elimination runs on polynomial entries with Bareiss one-step divisions (every
division is exact, entries stay minors of the input).  The elimination is
Gauss-Jordan: pivot columns end up clean in every other row, so solutions
and kernels fall out with a single rational division per entry and the hot
paths never compute a polynomial gcd.
"""

from __future__ import annotations

from .fields import MultiPoly, PolyRing, RatFunc, poly_gcd


def clear_denominators(row, ring: PolyRing) -> list:
    """Scale a RatFunc row by the lcm of denominators -> MultiPoly row."""
    lcm = ring.one
    for x in row:
        if not x.den.is_one():
            g = poly_gcd(lcm, x.den)
            lcm = lcm * x.den.divexact(g)
    if lcm.is_one():
        return [x.num for x in row]
    return [x.num * lcm.divexact(x.den) for x in row]


def row_content(row, ring: PolyRing) -> MultiPoly:
    acc = None
    for x in row:
        if not x.is_zero():
            acc = x if acc is None else poly_gcd(acc, x)
            if acc.is_one():
                return acc
    return acc if acc is not None else ring.one


def primitive_row(row, ring: PolyRing) -> list:
    c = row_content(row, ring)
    if c.is_one():
        return row
    return [x.divexact(c) for x in row]


class Echelon:
    """Fraction-free Gauss-Jordan form of a matrix over K.

    Built once from a list of rows; supports rank queries, membership of a
    vector in the row span, solving, and homogeneous kernel extraction.
    Pivot columns are clean: every pivot row has zeros in the other rows'
    pivot columns.
    """

    def __init__(self, ring: PolyRing, rows, ncols: int, ratrows=True, reduce_content=True):
        self.ring = ring
        self.ncols = ncols
        work = []
        for row in rows:
            prow = clear_denominators(row, ring) if ratrows else list(row)
            if reduce_content:
                prow = primitive_row(prow, ring)
            if any(not x.is_zero() for x in prow):
                work.append(prow)
        self.rows: list = []
        self.pivots: list = []
        self._eliminate(work)

    def _eliminate(self, work):
        ring = self.ring
        prev = ring.one
        r = 0
        n = len(work)
        for c in range(self.ncols):
            pr = None
            for i in range(r, n):
                if not work[i][c].is_zero():
                    pr = i
                    break
            if pr is None:
                continue
            work[r], work[pr] = work[pr], work[r]
            piv = work[r][c]
            prow = work[r]
            for i in range(n):
                if i == r:
                    continue
                row = work[i]
                head = row[c]
                if head.is_zero():
                    # the row op degenerates to scaling by piv/prev; the
                    # scaling is still required, later exact divisions
                    # assume every row carries the pivot factor
                    for j in range(self.ncols):
                        if not row[j].is_zero():
                            scaled = piv * row[j]
                            row[j] = scaled if prev.is_one() else scaled.divexact(prev)
                    continue
                for j in range(self.ncols):
                    if j != c:
                        row[j] = _det2(row[j], piv, head, prow[j], prev)
                row[c] = ring.zero
            prev = piv
            self.pivots.append(c)
            r += 1
            if r == n:
                break
        self.rows = work[:r]

    @property
    def rank(self) -> int:
        return len(self.rows)

    def residue(self, row, ratrow=True) -> list:
        """Reduce a vector against the echelon by cross-multiplication."""
        ring = self.ring
        one = ring.one
        v = clear_denominators(row, ring) if ratrow else list(row)
        for erow, c in zip(self.rows, self.pivots):
            head = v[c]
            if head.is_zero():
                continue
            piv = erow[c]
            v = [_det2(a, piv, head, b, one) for a, b in zip(v, erow)]
            v[c] = ring.zero
            v = primitive_row(v, ring)
        return v

    def contains(self, row, ratrow=True) -> bool:
        return all(x.is_zero() for x in self.residue(row, ratrow=ratrow))

    def solution(self, rhs_col: int):
        """x with (pivot cols of) x solving rows . x = rhs column, rest 0.

        The matrix must have been built with the right-hand side appended as
        column rhs_col; returns None when that column carries a pivot.
        """
        ring = self.ring
        if rhs_col in self.pivots:
            return None
        x = [ring.rat_zero] * self.ncols
        for row, c in zip(self.rows, self.pivots):
            if not row[rhs_col].is_zero():
                x[c] = ring.rat(row[rhs_col], row[c])
        return x


def _det2(a, piv, b, c, prev):
    """(a*piv - b*c) / prev, exact (Bareiss step) on MultiPoly entries."""
    from . import kernel

    ring = a.ring
    t = kernel.mp_det2(a.terms, b.terms, c.terms, piv.terms, ring.p)
    if not t:
        return ring.zero
    num = MultiPoly(ring, t)
    if prev.is_one():
        return num
    return num.divexact(prev)


def rank(ring: PolyRing, rows, ncols: int) -> int:
    return Echelon(ring, rows, ncols).rank


def kernel_basis(ring: PolyRing, rows, ncols: int) -> list:
    """Basis of {x : rows . x = 0}, as primitive polynomial RatFunc vectors.

    With the Jordan form each kernel vector reads off directly: free column
    f gets 1, pivot column c_i gets -row_i[f]/piv_i.
    """
    ech = Echelon(ring, rows, ncols)
    pivset = set(ech.pivots)
    basis = []
    for fc in range(ncols):
        if fc in pivset:
            continue
        x = [ring.rat_zero] * ncols
        x[fc] = ring.rat_one
        for row, c in zip(ech.rows, ech.pivots):
            if not row[fc].is_zero():
                x[c] = -ring.rat(row[fc], row[c])
        basis.append(normalize_vector(ring, x))
    return basis


def normalize_vector(ring: PolyRing, vec) -> list:
    """Canonical representative of a line: primitive, monic first entry."""
    polys = clear_denominators(vec, ring)
    polys = primitive_row(polys, ring)
    lead = next((x for x in polys if not x.is_zero()), None)
    if lead is None:
        return [ring.rat_zero] * len(vec)
    lc = lead.lead_coeff
    if lc != 1:
        inv = pow(lc, ring.p - 2, ring.p)
        polys = [x * inv for x in polys]
    return [ring.rat(x) for x in polys]


def solve(ring: PolyRing, rows, rhs, ncols: int):
    """One solution of rows . x = rhs, or None; free variables are set to 0."""
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    ech = Echelon(ring, aug, ncols + 1)
    sol = ech.solution(ncols)
    if sol is None:
        return None
    return sol[:ncols]


def intersection_dim(ring: PolyRing, rows_a, rows_b, ncols: int) -> int:
    ra = rank(ring, rows_a, ncols)
    rb = rank(ring, rows_b, ncols)
    rab = rank(ring, list(rows_a) + list(rows_b), ncols)
    return ra + rb - rab
