"""Backend selection for the hot decoding kernel.

The compiled extension is used when it imports; set ``DISCODEP_PURE_PYTHON=1``
to force the pure-Python fallback.
"""
import os

from . import _eisner_py

BACKENDS = {"python": _eisner_py.eisner}

try:
    from . import _eisner as _eisner_ext
except ImportError:  # extension not built
    _eisner_ext = None
else:
    BACKENDS["compiled"] = _eisner_ext.eisner

if _eisner_ext is not None and os.environ.get("DISCODEP_PURE_PYTHON", "") in ("", "0"):
    BACKEND = "compiled"
else:
    BACKEND = "python"


def eisner_kernel(backend=None):
    name = backend or BACKEND
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {', '.join(sorted(BACKENDS))}")
    return BACKENDS[name]
