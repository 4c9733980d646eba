"""Kernel selection: the compiled extension when importable, numpy otherwise.

Set ``SCRING_PURE_PYTHON=1`` to force the fallback.
"""

import os

import numpy as np

from . import _kernels_py

BACKEND = "python"
_compiled = None

if not os.environ.get("SCRING_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
        BACKEND = "cython"
    except ImportError:
        _compiled = None

_impl = _compiled if _compiled is not None else _kernels_py



def _c(a):
    return np.ascontiguousarray(a, dtype=float)


def boltzmann_mean(x, a, K):
    return _impl.boltzmann_mean(_c(x), float(a), int(K))


def evaluate_trace(t, open_t, close_t, levels, tau, R_s):
    return _impl.evaluate_trace(_c(t), _c(open_t), _c(close_t), _c(levels), float(tau), float(R_s))

