"""Backend selection for the scoring kernels.

The compiled extension is used when it imports; set ``GENLOGIC_PURE_PYTHON=1``
to force the pure-Python fallback.
"""
import os

from . import _kernels_py as python_backend

compiled_backend = None
if os.environ.get("GENLOGIC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:
        compiled_backend = None

_impl = compiled_backend or python_backend
BACKEND = "compiled" if compiled_backend is not None else "python"

accumulate = _impl.accumulate
argmax = _impl.argmax
count_equal = _impl.count_equal
equal_mask = _impl.equal_mask
masked_count_equal = _impl.masked_count_equal
pack_bits = _impl.pack_bits
unpack_bits = _impl.unpack_bits
