"""Arithmetic kernel selection.

Imports the compiled extension when it is available, otherwise the pure-Python
twin.  DESCENT_KIT_PURE=1 forces the fallback (useful for the benchmark and for
debugging).  Both expose the same functions on the same plain data; see
_fppy's docstring for the data model.
"""

import os

if os.environ.get("DESCENT_KIT_PURE"):
    from . import _fppy as _backend
else:
    try:
        from . import _fpcore as _backend  # type: ignore[attr-defined]
    except ImportError:
        from . import _fppy as _backend

BACKEND = _backend.BACKEND_NAME

mp_add = _backend.mp_add
mp_sub = _backend.mp_sub
mp_neg = _backend.mp_neg
mp_scale = _backend.mp_scale
mp_mul = _backend.mp_mul
mp_mul_term = _backend.mp_mul_term
mp_det2 = _backend.mp_det2
mp_divexact = _backend.mp_divexact
uni_trim = _backend.uni_trim
uni_add = _backend.uni_add
uni_sub = _backend.uni_sub
uni_mul = _backend.uni_mul
uni_divmod = _backend.uni_divmod
uni_gcd = _backend.uni_gcd
bi_gcd = _backend.bi_gcd
