"""Kernel selection: compiled extension when importable, numpy otherwise.

Set ``KGOURSAT_PURE=1`` in the environment to force the fallback.
"""

import os

from . import _fallback

BACKEND = "python"
biv_bessel = _fallback.biv_bessel

if os.environ.get("KGOURSAT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels
    except ImportError:  # extension not built
        pass
    else:
        biv_bessel = _kernels.biv_bessel
        BACKEND = "cython"
