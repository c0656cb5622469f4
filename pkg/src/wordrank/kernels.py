"""Backend selection for the hot loops.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
pure-Python implementations run. Set ``WORDRANK_PURE_PYTHON=1`` to force the
fallback.
"""
import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("WORDRANK_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
else:
    _impl = _pykernels

closed_partitions = _impl.closed_partitions
sn_cycle_histogram = _impl.sn_cycle_histogram
wreath_histogram = _impl.wreath_histogram
score_quotients = _impl.score_quotients

__all__ = ["BACKEND", "closed_partitions", "sn_cycle_histogram", "wreath_histogram", "score_quotients"]
