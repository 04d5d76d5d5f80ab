"""Kernel backend selection.

The compiled Cython core is preferred when present; the pure NumPy backend
is a drop-in replacement.  ``HKTRACE_BACKEND`` overrides the choice:

    auto (default)  compiled if importable, else pure Python
    cy              require the compiled core (ImportError if missing)
    py              force the pure Python backend
"""

import os

from . import _core_py as impl_py

try:
    from . import _core_cy as impl_cy
except ImportError:
    impl_cy = None

_requested = os.environ.get("HKTRACE_BACKEND", "auto").lower()
if _requested == "py":
    impl = impl_py
elif _requested == "cy":
    if impl_cy is None:
        raise ImportError(
            "HKTRACE_BACKEND=cy but the compiled core is not available; "
            "build it with `pip install -e . --no-build-isolation`"
        )
    impl = impl_cy
elif _requested == "auto":
    impl = impl_cy if impl_cy is not None else impl_py
else:
    raise ValueError(f"unknown HKTRACE_BACKEND value: {_requested!r}")

BACKEND = "cython" if (impl_cy is not None and impl is impl_cy) else "python"

STATUS_OK = impl_py.STATUS_OK
STATUS_NO_CONVERGE = impl_py.STATUS_NO_CONVERGE
