"""Selects the pair-scanning backend at import time.

The compiled ``_ckernel`` is used when it was built; otherwise, or when
``RSUMSET_PURE_PYTHON=1`` is set, the pure-Python twin is used.  Both
return identical results.
"""
import os

from . import _pykernel

BACKEND = "python"
scan_rows = _pykernel.scan_rows

if os.environ.get("RSUMSET_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernel
    except ImportError:
        pass
    else:
        scan_rows = _ckernel.scan_rows
        BACKEND = "cython"

python_scan_rows = _pykernel.scan_rows


def compiled_scan_rows():
    """The compiled scanner, or None when the extension is not built."""
    try:
        from . import _ckernel
    except ImportError:
        return None
    return _ckernel.scan_rows
