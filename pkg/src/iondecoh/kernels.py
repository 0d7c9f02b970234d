"""Backend selector for the hot kernels.

Prefers the compiled _fastcore extension and falls back to the numpy
implementation in _purecore when the extension is absent (source install
without a compiler) or when IONDECOH_PURE is set in the environment.
"""

import os

if os.environ.get("IONDECOH_PURE"):
    from . import _purecore as _impl

    BACKEND = "pure"
else:
    try:
        from . import _fastcore as _impl

        BACKEND = "fast"
    except ImportError:
        from . import _purecore as _impl

        BACKEND = "pure"

rk4_path = _impl.rk4_path
zeno_rate_pair = _impl.zeno_rate_pair
