"""Kernel backend selection.

The compiled extension ``mcsum._kernels`` is used when it was built; the
pure-Python ``mcsum._kernels_py`` is the fallback.  Setting the environment
variable ``MCSUM_PURE_PYTHON=1`` forces the fallback.
"""
import os

if os.environ.get("MCSUM_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

cf_tails = _impl.cf_tails
rational_partial_sum = _impl.rational_partial_sum

__all__ = ["BACKEND", "cf_tails", "rational_partial_sum"]
