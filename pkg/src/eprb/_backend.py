"""Kernel backend selection.

Prefers the compiled extension (``eprb._kernels``) and falls back to the
pure-Python twin when it is not built. Both produce bit-identical results;
the compiled one is just fast. Override with EPRB_BACKEND=compiled|python.
"""

from __future__ import annotations

import os

_requested = os.environ.get("EPRB_BACKEND", "auto").strip().lower()

if _requested in ("auto", ""):
    try:
        from . import _kernels as _impl

        BACKEND_NAME = "compiled"
    except ImportError:
        from . import _pykernels as _impl

        BACKEND_NAME = "python"
elif _requested in ("compiled", "c"):
    from . import _kernels as _impl

    BACKEND_NAME = "compiled"
elif _requested in ("python", "pure"):
    from . import _pykernels as _impl

    BACKEND_NAME = "python"
else:
    raise RuntimeError(
        f"EPRB_BACKEND must be auto, compiled, or python; got {_requested!r}"
    )

MASK64 = _impl.MASK64

SAMPLER_SPHERE = _impl.SAMPLER_SPHERE
SAMPLER_CUBE = _impl.SAMPLER_CUBE

KIND_SIGN = _impl.KIND_SIGN
KIND_LINEAR = _impl.KIND_LINEAR
KIND_COIN = _impl.KIND_COIN
KIND_CONSTANT = _impl.KIND_CONSTANT
KIND_FIXED = _impl.KIND_FIXED

MAX_DIM = _impl.MAX_DIM
MAX_DEGREE = _impl.MAX_DEGREE

STATUS_OK = _impl.STATUS_OK
STATUS_BAD_PROBABILITY = _impl.STATUS_BAD_PROBABILITY

mix64 = _impl.mix64
stream_word = _impl.stream_word
uniform01 = _impl.uniform01
lambda_at = _impl.lambda_at
lambda_batch = _impl.lambda_batch
reduce_product = _impl.reduce_product
reduce_joint = _impl.reduce_joint
series_value = _impl.series_value
