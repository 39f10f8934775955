"""Shared reference towers for the test suite.

make_t1: p=2, K=F2(t),   L = K(a1),      a1^2 = t                 (exponent 1)
make_t2: p=2, K=F2(s,t), L = K(a1, a2),  a1^2 = s, a2^4 = t       (exponent 2)
make_t3: p=3, K=F3(t),   L = K(i, b),    i^2 = -1 (conj c), b^3 = t
"""

from descent_kit.fields import PolyRing
from descent_kit.tower import validate_tower


def make_t1():
    ring = PolyRing(2, ("t",))
    t = ring.rat(ring.variable("t"))
    return validate_tower(ring, None, None, {}, [("a1", 1, t)])


def make_t2():
    ring = PolyRing(2, ("s", "t"))
    s = ring.rat(ring.variable("s"))
    t = ring.rat(ring.variable("t"))
    return validate_tower(ring, None, None, {},
                          [("a1", 1, s), ("a2", 2, t)])


def make_t3():
    ring = PolyRing(3, ("t",))
    t = ring.rat(ring.variable("t"))
    one = ring.rat_one
    zero = ring.rat_zero
    minpoly = [one, zero, one]  # y^2 + 1
    autos = {"c": [zero, ring.rat(2)]}  # i -> -i
    return validate_tower(ring, "i", minpoly, autos, [("b", 1, t)])
