"""Backend selection for the field kernels.

The compiled extension is preferred; setting the environment variable
``KELVIN_PURE_PYTHON=1`` (or a failed import) selects the numpy fallback.
"""
import os

from kelvin import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("KELVIN_PURE_PYTHON"):
    try:
        from kelvin import _ckernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:  # extension not built
        pass

kelvin_state = _impl.kelvin_state
green_tensor = _impl.green_tensor


def available_backends():
    out = {"python": _pykernels}
    try:
        from kelvin import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
