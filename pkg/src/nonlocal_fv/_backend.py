"""Selects the compiled stepping kernels or the numpy fallback at import.

The environment variable NONLOCAL_FV_BACKEND forces the choice:
"compiled" requires the extension, "python" skips it, anything else
(or unset) means "compiled when available".
"""

import os

from . import _kernels_py

try:
    from . import _core as _compiled
except ImportError:
    _compiled = None

_requested = os.environ.get("NONLOCAL_FV_BACKEND", "auto").strip().lower()

if _requested == "python":
    _impl = _kernels_py
elif _requested == "compiled":
    if _compiled is None:
        raise ImportError(
            "NONLOCAL_FV_BACKEND=compiled but the nonlocal_fv._core extension "
            "is not built; reinstall with a C toolchain available"
        )
    _impl = _compiled
elif _requested in ("", "auto"):
    _impl = _compiled if _compiled is not None else _kernels_py
else:
    raise ValueError(f"unknown NONLOCAL_FV_BACKEND value: {_requested!r}")

limited_slopes = _impl.limited_slopes
conv_cell = _impl.conv_cell
conv_interface = _impl.conv_interface


def active_backend() -> str:
    """Name of the kernel implementation in use: 'compiled' or 'python'."""
    return "python" if _impl is _kernels_py else "compiled"


def available_backends() -> dict:
    """All importable kernel implementations, keyed by name."""
    found = {"python": _kernels_py}
    if _compiled is not None:
        found["compiled"] = _compiled
    return found
