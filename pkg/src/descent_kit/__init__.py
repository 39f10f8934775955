"""descent-kit: exact Galois descent for finite normal modular field
extensions in characteristic p.

The package computes with the truncated polynomial ring L[X] / (X^(p^e)) over
a tower L/K, the group of its K[X]-algebra automorphisms fixing X, the
associated Galois-Hopf algebra, and the descent decision procedures that those
structures support.  All arithmetic is exact.
"""

from .errors import *  # noqa: F401,F403
from .fields import (  # noqa: F401
    MultiPoly,
    PolyRing,
    PrimeModulus,
    RatFunc,
    poly_gcd,
    pth_root,
    ratfunc_arith,
)
from .kernel import BACKEND as KERNEL_BACKEND  # noqa: F401

__version__ = "0.1.0"
