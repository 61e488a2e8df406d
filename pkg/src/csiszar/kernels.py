"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the pure-Python
fallback is imported. Set ``CSISZAR_PURE_PYTHON=1`` to force the fallback.
"""
import os

from csiszar import _kernels_py

if os.environ.get("CSISZAR_PURE_PYTHON", "") not in ("", "0"):
    _compiled = None
else:
    try:
        from csiszar import _kernels as _compiled
    except ImportError:
        _compiled = None

if _compiled is not None:
    BACKEND = "cython"
    jacobi_eigh = _compiled.jacobi_eigh
    kahan_sum = _compiled.kahan_sum
    kahan_sum_rows = _compiled.kahan_sum_rows
else:
    BACKEND = "python"
    jacobi_eigh = _kernels_py.jacobi_eigh
    kahan_sum = _kernels_py.kahan_sum
    kahan_sum_rows = _kernels_py.kahan_sum_rows


def available_backends():
    """Map of backend name to kernel module, for parity tests and benchmarks."""
    backends = {"python": _kernels_py}
    try:
        from csiszar import _kernels
    except ImportError:
        pass
    else:
        backends["cython"] = _kernels
    return backends


__all__ = ["BACKEND", "jacobi_eigh", "kahan_sum", "kahan_sum_rows", "available_backends"]
