"""Inner loops, compiled when the extension is available.

``BACKEND`` is "cython" or "python".  Set FLATFIBER_PURE_PYTHON=1 to force the
fallback.
"""

import os

if os.environ.get("FLATFIBER_PURE_PYTHON"):
    from ._kernels_py import count_unimodular, find_conjugator
    BACKEND = "python"
else:
    try:
        from ._kernels import count_unimodular, find_conjugator
        BACKEND = "cython"
    except ImportError:
        from ._kernels_py import count_unimodular, find_conjugator
        BACKEND = "python"

__all__ = ["BACKEND", "count_unimodular", "find_conjugator"]
