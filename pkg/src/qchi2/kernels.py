"""Backend selection for the numerical kernels.

The Cython extension ``qchi2._kernels`` is used when it has been built;
otherwise (or when the environment variable ``QCHI2_PURE_PYTHON`` is set to
a non-empty value other than ``0``) the NumPy versions are used.
"""

import os

from . import _kernels_py
from ._kernels_py import (  # noqa: F401
    FAMILY_GENERIC,
    FAMILY_MAX,
    FAMILY_MIN,
    FAMILY_RUSKAI,
    FAMILY_WYD,
)


def _load():
    if os.environ.get("QCHI2_PURE_PYTHON", "0") not in ("", "0"):
        return _kernels_py, "python"
    try:
        from . import _kernels
    except ImportError:
        return _kernels_py, "python"
    return _kernels, "cython"


_impl, BACKEND = _load()

mc_kernel = _impl.mc_kernel
hadamard_quadform = _impl.hadamard_quadform
weight_log_nodes = _impl.weight_log_nodes
divided_differences = _impl.divided_differences


def compiled_module():
    """Return the compiled kernel module, or ``None`` if it was not built."""
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels
