"""Kernel selection: compiled extension when available, pure Python otherwise.

Set KNASTER_LAB_BACKEND=py or =c to force a choice (=c raises if the
extension is missing). ``backend_name()`` reports what was picked.
"""

import os

_forced = os.environ.get("KNASTER_LAB_BACKEND", "").strip().lower()

if _forced == "py":
    from . import _kernel_py as kernel
    _name = "python"
elif _forced == "c":
    from . import _kernel_c as kernel  # type: ignore[attr-defined]
    _name = "compiled"
else:
    try:
        from . import _kernel_c as kernel  # type: ignore[attr-defined]
        _name = "compiled"
    except ImportError:
        from . import _kernel_py as kernel
        _name = "python"


def backend_name():
    return _name
