"""
Backend selection for the time-integration kernel.

The compiled extension ``_kernel`` is used when it imports; otherwise the
numpy implementation in ``_kernel_py``. Set ``TIPEMISSION_BACKEND=python`` to
force the fallback.
"""

import logging
import os

from . import _kernel_py

logger = logging.getLogger(__name__)

python_kernel = _kernel_py.integrate_pair

try:
    from . import _kernel as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

compiled_kernel = _compiled.integrate_pair if _compiled is not None else None

if compiled_kernel is not None and os.environ.get("TIPEMISSION_BACKEND", "").lower() != "python":
    integrate_pair = compiled_kernel
    BACKEND = "compiled"
else:
    integrate_pair = python_kernel
    BACKEND = "python"
    if compiled_kernel is None:
        logger.debug("compiled kernel unavailable, using numpy fallback")

__all__ = ["integrate_pair", "python_kernel", "compiled_kernel", "BACKEND"]
