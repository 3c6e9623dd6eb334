"""Backend selection for the search kernels.

The compiled extension is used when it was built; otherwise, or when
QUATKS_PURE_PYTHON=1 is set, the pure-Python versions are used.
"""
import os

from quatks import _kernels_py

if os.environ.get("QUATKS_PURE_PYTHON") == "1":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from quatks import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

mu_search = _impl.mu_search
local_solution_exists = _impl.local_solution_exists
