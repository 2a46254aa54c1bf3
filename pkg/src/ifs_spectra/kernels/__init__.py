"""Hot evaluation kernels with a compiled core and a numpy fallback.

Set ``IFS_SPECTRA_PURE_PY=1`` to force the numpy implementation even when the
compiled extension is available (used by the benchmark and for debugging).
"""

import os

if os.environ.get("IFS_SPECTRA_PURE_PY"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
mask_values = _impl.mask_values
weight_values = _impl.weight_values
mask_products = _impl.mask_products

__all__ = ["BACKEND", "mask_values", "weight_values", "mask_products"]
