"""Select the compiled kernels when available, else the numpy fallback.

Set ``TOMONOISE_BACKEND=python`` to force the fallback.
"""
import os

from . import _pykernels

KERNEL_LINEAR = _pykernels.KERNEL_LINEAR
KERNEL_LANCZOS3 = _pykernels.KERNEL_LANCZOS3

_core = None
if os.environ.get("TOMONOISE_BACKEND", "").lower() != "python":
    try:
        from . import _core
    except ImportError:
        _core = None

if _core is not None:
    BACKEND = "cython"
    line_integrals = _core.line_integrals
    backproject_linear = _core.backproject_linear
else:
    BACKEND = "python"
    line_integrals = _pykernels.line_integrals
    backproject_linear = _pykernels.backproject_linear


def kernel_code(name: str) -> int:
    key = name.lower().replace("-", "")
    if key in ("linear", "bilinear"):
        return KERNEL_LINEAR
    if key == "lanczos3":
        return KERNEL_LANCZOS3
    raise ValueError(f"line integration supports 'linear' and 'lanczos3', not {name!r}")
