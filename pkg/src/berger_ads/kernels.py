"""Back-end selection for the oracle integrator.

The compiled extension is used when it imports; setting
``BERGER_ADS_PURE_PYTHON=1`` forces the numpy fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
rkmk4 = _kernels_py.rkmk4

if os.environ.get("BERGER_ADS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels

        rkmk4 = _kernels.rkmk4
        BACKEND = "cython"
    except ImportError:
        pass
