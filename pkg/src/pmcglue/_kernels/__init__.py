"""Kernel selection: compiled extension if available, numpy fallback otherwise.

Set ``PMCGLUE_PURE=1`` to force the fallback (used by the benchmark and to
reproduce results on machines without a compiler).
"""

import os

from . import pure

if os.environ.get("PMCGLUE_PURE") == "1":
    _impl = pure
    BACKEND = "pure"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = pure
        BACKEND = "pure"

legendre_series = _impl.legendre_series

__all__ = ["legendre_series", "BACKEND", "pure"]
