"""Select the compiled core when it is importable, else the Python fallback.

Set ``BINFRINGE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _core_py

try:
    if os.environ.get("BINFRINGE_PURE_PYTHON"):
        raise ImportError("pure-Python backend requested")
    from . import _core as core
    NAME = "cython"
except ImportError:
    core = _core_py
    NAME = "python"

dbs_frame_pass = core.dbs_frame_pass
phase_pixel_pass = core.phase_pixel_pass
