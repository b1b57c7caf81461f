"""Selects the compiled lag-sum kernels, falling back to NumPy.

Set ``FWNTEST_PURE_PYTHON=1`` to force the fallback.
"""

import os

import numpy as np

from . import _core_py

BACKEND = "python"
_impl = _core_py

if not os.environ.get("FWNTEST_PURE_PYTHON"):
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _core_py


def _c(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def gram(x, w):
    # matrix products are faster through BLAS than through compiled loops
    return _core_py.gram(_c(x), _c(w))


def lag_sums(g, jmax):
    return _impl.lag_sums(_c(g), int(jmax))


def trace_sums(g, jmax):
    return _impl.trace_sums(_c(g), int(jmax))


def trace_cube(g):
    return _core_py.trace_cube(_c(g))
