"""Kernel selection: the compiled extension when built, else pure Python.

Set ``RCFCUTS_PURE_PYTHON=1`` to force the fallback.
"""

import os

BACKEND = "python"

if not os.environ.get("RCFCUTS_PURE_PYTHON"):
    try:
        from ._kernels import box_eval, sign_at, sign_variations  # noqa: F401

        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._kernels_py import box_eval, sign_at, sign_variations  # noqa: F401

__all__ = ["BACKEND", "box_eval", "sign_at", "sign_variations"]
