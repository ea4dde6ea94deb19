"""Hot numeric kernels: compiled extension when available, numpy fallback.

Set PVMINCQ_PURE_PYTHON=1 to force the fallback (used by the benchmark and
by the equivalence tests).
"""

import os

from . import _fallback

if os.environ.get("PVMINCQ_PURE_PYTHON"):
    _impl = _fallback
    HAVE_COMPILED = False
else:
    try:
        from . import _speedups as _impl

        HAVE_COMPILED = True
    except ImportError:
        _impl = _fallback
        HAVE_COMPILED = False

project_box_hyperplane = _impl.project_box_hyperplane
qp_minimize = _impl.qp_minimize
max_bipartite_matching = _impl.max_bipartite_matching

__all__ = [
    "HAVE_COMPILED",
    "project_box_hyperplane",
    "qp_minimize",
    "max_bipartite_matching",
]
