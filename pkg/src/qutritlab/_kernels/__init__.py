"""Hot loops for master-equation integration.

The compiled module is used when it was built at install time; otherwise
the numpy implementation is selected. Set ``QUTRITLAB_PURE_PYTHON=1`` to
force the fallback.
"""
import os

from . import _pykernels as python_kernels

try:
    if os.environ.get("QUTRITLAB_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-Python kernels requested")
    from . import _ckernels as _active
except ImportError:
    _active = python_kernels

try:
    from . import _ckernels as compiled_kernels
except ImportError:
    compiled_kernels = None

BACKEND = _active.BACKEND
lindblad_rhs = _active.lindblad_rhs
rk4_lindblad = _active.rk4_lindblad
sample_steps = python_kernels.sample_steps
