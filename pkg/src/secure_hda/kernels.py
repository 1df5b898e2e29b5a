"""Kernel backend selection.

The Cython extension is used when it was built; otherwise the NumPy
implementation. Set ``SECURE_HDA_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("SECURE_HDA_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

linear_error_moments = _impl.linear_error_moments
