"""Kernel backend selection.

The compiled Cython core is preferred; set HALPHEN_PURE_KERNEL=1 to force the
pure-Python fallback (used by the backend-parity tests and the benchmark).
"""

import os

if os.environ.get("HALPHEN_PURE_KERNEL"):
    from . import _core_py as impl
else:
    try:
        from . import _core as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _core_py as impl

BACKEND = impl.BACKEND
GREVLEX = impl.GREVLEX
LEX = impl.LEX
ELIM = impl.ELIM
mul_terms = impl.mul_terms
iaxpy = impl.iaxpy
cmp_keys = impl.cmp_keys
find_lm = impl.find_lm
divides = impl.divides
