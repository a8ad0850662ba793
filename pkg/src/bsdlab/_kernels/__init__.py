"""Kernel backend selection.

The compiled extension is preferred; BSDLAB_PURE=1 forces the pure-Python
twin, and a missing extension silently falls back to it.  Both expose the
same functions with identical numeric behaviour.
"""

import os


def _select():
    if os.environ.get("BSDLAB_PURE", "").strip() not in ("", "0"):
        from . import _slow

        return _slow, False
    try:
        from . import _fast

        return _fast, True
    except ImportError:
        from . import _slow

        return _slow, False


impl, HAVE_FAST = _select()

BACKEND = "compiled" if HAVE_FAST else "pure-python"
