# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. ``_kernels_py`` holds the reference numpy versions."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, floor

cnp.import_array()


def boltzmann_mean(const double[::1] x, double a, Py_ssize_t K):
    """Mean winding number for each flux ratio in ``x``.

    ``a`` is the level spacing over k_B T; the window holds the 2(K+1)
    integers closest to each ``x``, paired symmetrically so the half-integer
    doublet cancels exactly.
    """
    cdef Py_ssize_t i, j, n = x.shape[0]
    cdef double xi, f, u_lo, u_hi, w_lo, w_hi, ref, num, den
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] res = out
    for i in range(n):
        xi = x[i]
        f = floor(xi)
        u_lo = f - xi
        u_hi = f + 1.0 - xi
        ref = u_lo * u_lo if u_lo * u_lo < u_hi * u_hi else u_hi * u_hi
        num = 0.0
        den = 0.0
        for j in range(K + 1):
            u_lo = f - j - xi
            u_hi = f + 1.0 + j - xi
            w_lo = exp(-a * (u_lo * u_lo - ref))
            w_hi = exp(-a * (u_hi * u_hi - ref))
            num += (f - j) * w_lo + (f + 1.0 + j) * w_hi
            den += w_lo + w_hi
        res[i] = num / den
    return out


def evaluate_trace(const double[::1] t, const double[::1] open_t,
                   const double[::1] close_t, const double[::1] levels,
                   double tau, double R_s):
    """Current and segment voltage at sorted sample times ``t``.

    ``levels[k]`` is the current held before the k-th opening; the last
    entry is the level after the final closing.
    """
    cdef Py_ssize_t i, k = 0, idx, n = t.shape[0], K = open_t.shape[0]
    cdef double ts, cur
    current = np.empty(n, dtype=np.float64)
    voltage = np.empty(n, dtype=np.float64)
    cdef double[::1] I = current
    cdef double[::1] V = voltage
    for i in range(n):
        ts = t[i]
        while k < K and open_t[k] <= ts:
            k += 1
        if k == 0:
            I[i] = levels[0]
            V[i] = 0.0
            continue
        idx = k - 1
        if ts < close_t[idx]:
            cur = levels[idx] * exp(-(ts - open_t[idx]) / tau)
            I[i] = cur
            V[i] = R_s * cur
        else:
            I[i] = levels[idx + 1]
            V[i] = 0.0
    return current, voltage
