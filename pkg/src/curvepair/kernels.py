"""Backend selection for the evaluation kernels.

The compiled extension is used when it was built; otherwise the pure-Python
module is loaded.  Set ``CURVEPAIR_PURE=1`` to force the fallback.
"""

import os

BACKEND = "python"

if os.environ.get("CURVEPAIR_PURE", "") not in ("", "0"):
    from ._pykernels import eval_box, eval_point, imul, ipow
else:
    try:
        from ._ckernels import eval_box, eval_point, imul, ipow

        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._pykernels import eval_box, eval_point, imul, ipow

__all__ = ["BACKEND", "eval_box", "eval_point", "imul", "ipow"]
