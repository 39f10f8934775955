"""The truncated polynomial algebra L[Xb] = L[X]/(X^(p^e)).

Elements hold a fixed-length tuple of p^e tower-element coefficients
(coefficient of Xb^k at index k).  The truncation exponent comes from the
tower: e = max n_i.
"""

from __future__ import annotations

import math

from .errors import NotAUnit, SpecMismatch
from .fields import RatFunc
from .tower import TowerElement, TowerSpec


class TruncElement:
    __slots__ = ("spec", "parts")

    def __init__(self, spec: TowerSpec, parts):
        self.spec = spec
        q = spec.p ** spec.exponent
        parts = tuple(parts)
        if len(parts) != q:
            raise ValueError("expected %d coefficients, got %d" % (q, len(parts)))
        self.parts = parts

    @property
    def rank(self) -> int:
        return len(self.parts)

    def _check(self, other):
        if self.spec is not other.spec and self.spec != other.spec:
            raise SpecMismatch("truncated elements live over different towers")

    def _lift(self, other):
        if isinstance(other, (int, RatFunc)):
            other = self.spec.scalar(other)
        if isinstance(other, TowerElement):
            return from_tower(other, rank=len(self.parts))
        if isinstance(other, TruncElement):
            return other
        return None

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.parts)

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        self._check(other)
        return TruncElement(self.spec,
                            [a + b for a, b in zip(self.parts, other.parts)])

    __radd__ = __add__

    def __neg__(self):
        return TruncElement(self.spec, [-c for c in self.parts])

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        self._check(other)
        return TruncElement(self.spec,
                            [a - b for a, b in zip(self.parts, other.parts)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, RatFunc, TowerElement)):
            if isinstance(other, int):
                other = self.spec.ring.rat(other)
            return TruncElement(self.spec, [c * other for c in self.parts])
        if not isinstance(other, TruncElement):
            return NotImplemented
        self._check(other)
        q = len(self.parts)
        out = [self.spec.zero() for _ in range(q)]
        for i, a in enumerate(self.parts):
            if a.is_zero():
                continue
            for j, b in enumerate(other.parts):
                if i + j >= q:
                    break
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return TruncElement(self.spec, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return trunc_invert(self) ** (-n)
        acc = one(self.spec, rank=len(self.parts))
        base = self
        while n:
            if n & 1:
                acc = acc * base
            n >>= 1
            if n:
                base = base * base
        return acc

    def __eq__(self, other):
        other = self._lift(other) if not isinstance(other, TruncElement) else other
        if isinstance(other, TruncElement):
            return self.spec == other.spec and self.parts == other.parts
        return NotImplemented

    def __hash__(self):
        return hash((self.spec.degree, self.parts))

    def shift(self, k: int):
        """Multiply by Xb^k."""
        q = len(self.parts)
        zero = self.spec.zero()
        return TruncElement(
            self.spec, [zero] * k + list(self.parts[: q - k]) if k < q
            else [zero] * q)

    def map_coeffs(self, fn):
        return TruncElement(self.spec, [fn(c) for c in self.parts])

    def __str__(self):
        items = []
        for k, c in enumerate(self.parts):
            if c.is_zero():
                continue
            if k == 0:
                items.append(str(c))
                continue
            xs = "X" if k == 1 else "X^%d" % k
            if c.is_one():
                items.append(xs)
            else:
                cs = str(c)
                if " + " in cs:
                    cs = "(" + cs + ")"
                items.append(cs + "*" + xs)
        return " + ".join(items) if items else "0"

    def __repr__(self):
        return "<%s>" % self


def from_tower(c: TowerElement, rank=None) -> TruncElement:
    spec = c.spec
    q = spec.p ** spec.exponent if rank is None else rank
    parts = [c] + [spec.zero()] * (q - 1)
    return TruncElement(spec, parts)


def zero(spec: TowerSpec, rank=None) -> TruncElement:
    q = spec.p ** spec.exponent if rank is None else rank
    return TruncElement(spec, [spec.zero()] * q)


def one(spec: TowerSpec, rank=None) -> TruncElement:
    return from_tower(spec.one(), rank=rank)


def xbar(spec: TowerSpec, power: int = 1) -> TruncElement:
    q = spec.p ** spec.exponent
    parts = [spec.zero()] * q
    if power < q:
        parts[power] = spec.one()
    return TruncElement(spec, parts)


def trunc_arith(op: str, x: TruncElement, y: TruncElement) -> TruncElement:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError("unknown op: %s" % op)


def trunc_invert(x: TruncElement) -> TruncElement:
    """Inverse of a unit: x = c0(1 + n) with n nilpotent, Neumann series."""
    c0 = x.parts[0]
    if c0.is_zero():
        raise NotAUnit("constant coefficient is zero")
    from .tower import elt_inverse

    c0inv = elt_inverse(c0)
    n = (x * c0inv) - 1  # nilpotent part
    q = len(x.parts)
    acc = one(x.spec, rank=q)
    term = one(x.spec, rank=q)
    k = 1
    while k < q and not term.is_zero():
        term = term * n
        acc = acc - term if k % 2 else acc + term
        k += 1
    # acc = sum (-n)^k; note -term alternation handled above
    return acc * c0inv


def xbar_valuation(x: TruncElement):
    """Least k with a nonzero Xb^k coefficient; math.inf for zero."""
    for k, c in enumerate(x.parts):
        if not c.is_zero():
            return k
    return math.inf


def closed_fiber(x: TruncElement) -> TowerElement:
    return x.parts[0]
